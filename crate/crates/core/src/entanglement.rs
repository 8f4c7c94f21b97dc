//! Two-spin reduced states and pairwise concurrence.
//!
//! The ground state is a sum of two product states, so the reduced state of
//! any pair only needs single-site overlaps; its cost does not grow with `N`
//! beyond a product of `N - 2` scalars.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, kron2, kron_vec2, sigma_y, Mat4, Vec2, C64, ZERO};
use crate::model::{ModelParams, Sign};
use crate::mps::{chi_vectors, phi_vectors, PureState};

const DENSITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairDensityMatrix {
    pub rho: Mat4,
}

impl PairDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-12).
    pub fn new(rho: Mat4) -> Result<Self> {
        let defect = (rho - rho.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr - c(1.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidParameter(format!("density matrix trace {tr} != 1")));
        }
        let min_ev = hermitian(&rho).symmetric_eigenvalues().min();
        if min_ev < -DENSITY_TOL {
            return Err(Error::NotPositive(min_ev));
        }
        Ok(Self { rho })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = hermitian(&self.rho).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > tol).count()
    }
}

fn hermitian(m: &Mat4) -> Mat4 {
    (m + m.adjoint()) * c(0.5)
}

/// Per-site factors `(a_k, b_k)` of `|Psi> ~ prod_k a_k + prod_k b_k`.
fn product_factors(p: &ModelParams) -> Result<Vec<(Vec2, Vec2)>> {
    Ok(match p.eta {
        Sign::Plus => {
            let pair = phi_vectors(p.epsilon, p.g);
            vec![pair; p.n]
        }
        Sign::Minus => {
            p.require_even_for_eta_minus()?;
            let (plus, minus) = chi_vectors(p.epsilon, p.g);
            (0..p.n).map(|k| if k % 2 == 0 { (plus, minus) } else { (minus, plus) }).collect()
        }
    })
}

/// Reduced state of sites `i` and `j` (1-based, distinct) from the two-product
/// structure of the ground state:
/// `rho ~ sum_{alpha,beta} prod_{k != i,j} <beta_k|alpha_k> |alpha_i alpha_j><beta_i beta_j|`.
pub fn pair_density(p: &ModelParams, i: usize, j: usize) -> Result<PairDensityMatrix> {
    let n = p.n;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::BadSites { i, j, n });
    }
    if n < 4 {
        return Err(Error::InvalidParameter(format!("pair density needs N >= 4, got {n}")));
    }
    let factors = product_factors(p)?;
    let (lo, hi) = (i.min(j) - 1, i.max(j) - 1);
    let pick = |k: usize, which: usize| if which == 0 { factors[k].0 } else { factors[k].1 };

    let mut rho = Mat4::zeros();
    for alpha in 0..2 {
        for beta in 0..2 {
            let env: C64 = (0..n)
                .filter(|&k| k != lo && k != hi)
                .map(|k| pick(k, beta).dotc(&pick(k, alpha)))
                .product();
            let ket = kron_vec2(&pick(lo, alpha), &pick(hi, alpha));
            let bra = kron_vec2(&pick(lo, beta), &pick(hi, beta));
            rho += ket * bra.adjoint() * env;
        }
    }
    let tr = rho.trace();
    if tr.norm() == 0.0 {
        return Err(Error::DegenerateState);
    }
    PairDensityMatrix::new(hermitian(&(rho / tr)))
}

/// Brute-force reduced state of sites `i < j` or `j < i` (1-based) of a dense
/// state, ordered as `(min, max)`.
pub fn partial_trace_pair(state: &PureState, i: usize, j: usize) -> Result<Mat4> {
    let n = state.n;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::BadSites { i, j, n });
    }
    let (sa, sb) = (n - i.min(j), n - i.max(j));
    let rest = n - 2;
    // Amplitudes regrouped as a 4 x 2^{N-2} matrix, rho = T T^dag.
    let mut t = DMatrix::from_element(4, 1 << rest, ZERO);
    for (idx, amp) in state.amplitudes.iter().enumerate() {
        let row = (((idx >> sa) & 1) << 1) | ((idx >> sb) & 1);
        let mut col = 0usize;
        for pos in (0..n).rev() {
            if pos != sa && pos != sb {
                col = (col << 1) | ((idx >> pos) & 1);
            }
        }
        t[(row, col)] = *amp;
    }
    let rho = &t * t.adjoint();
    Ok(Mat4::from_fn(|r, col| rho[(r, col)]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcurrenceResult {
    pub c: f64,
    /// Square roots of the eigenvalues of `rho rho~`, decreasing.
    pub sqrt_eigenvalues: [f64; 4],
    pub method: &'static str,
}

/// Eigenvalues of `rho` below this fraction of the trace are treated as zero
/// before factoring `rho = W W^dag`.
const RANK_CUTOFF: f64 = 1e-14;

/// Wootters concurrence `max(0, s1 - s2 - s3 - s4)`.
///
/// The `s_k` (square roots of the spectrum of `rho (Y(x)Y) rho* (Y(x)Y)`) are
/// obtained as singular values of `tau = W^T (Y(x)Y) W` with `rho = W W^dag`,
/// which has the same nonzero spectrum without taking square roots of
/// round-off-sized eigenvalues.
pub fn wootters_concurrence(rho: &PairDensityMatrix) -> Result<ConcurrenceResult> {
    let rho = PairDensityMatrix::new(rho.rho)?.rho;
    let eig = hermitian(&rho).symmetric_eigen();
    let cutoff = RANK_CUTOFF * rho.trace().re.abs().max(1.0);
    let mut w = eig.eigenvectors;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let s = if lam > cutoff { lam.sqrt() } else { 0.0 };
        w.column_mut(k).scale_mut(s);
    }
    let yy = kron2(&sigma_y(), &sigma_y());
    let tau = w.transpose() * yy * w;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let sqrt_eigenvalues = [s[0], s[1], s[2], s[3]];
    let conc = (s[0] - s[1] - s[2] - s[3]).max(0.0);
    Ok(ConcurrenceResult { c: conc, sqrt_eigenvalues, method: "tau-singular-values" })
}

/// `C = 4|g| |1-|g||^{N-2} / |(1+g)^N + (1-g)^N|`, evaluated in log form.
pub fn concurrence_closed(g: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring size must be >= 3, got {n}")));
    }
    let gap = (1.0 - g.abs()).abs();
    if g == 0.0 || gap == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = (1.0 + g, 1.0 - g);
    let (big, ratio) = if a.abs() >= b.abs() { (a.abs(), b / a) } else { (b.abs(), a / b) };
    let nf = n as f64;
    let ratio_pow = if n <= i32::MAX as usize {
        ratio.powi(n as i32)
    } else {
        let sign = if ratio < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        sign * (nf * ratio.abs().ln()).exp()
    };
    let log_mag = (nf - 2.0) * gap.ln() - nf * big.ln();
    Ok(4.0 * g.abs() * log_mag.exp() / (1.0 + ratio_pow).abs())
}

/// `2|g| e^{-|g|} / cosh g`.
pub fn scaling_limit(g: f64) -> f64 {
    2.0 * g.abs() * (-g.abs()).exp() / g.cosh()
}

/// Points `(g, N C(g/N, N))`.
pub fn scaled_concurrence_curve(n: usize, g_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    g_grid
        .iter()
        .map(|&g| Ok((g, n as f64 * concurrence_closed(g / n as f64, n)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, ONE};
    use crate::model::mps_matrices;
    use crate::mps::{build_state, explicit_ground_state};
    use crate::parent::bell;

    fn model(eta: Sign, g: f64, n: usize) -> ModelParams {
        ModelParams::new(Sign::Plus, eta, g, 1.0, n).unwrap()
    }

    #[test]
    fn ghz_pair_marginal() {
        let rho = pair_density(&model(Sign::Plus, 1.0, 6), 1, 4).unwrap();
        let mut want = Mat4::zeros();
        want[(0, 0)] = c(0.5);
        want[(3, 3)] = c(0.5);
        assert!(max_abs(&(rho.rho - want)) < 1e-15);
        assert!(wootters_concurrence(&rho).unwrap().c < 1e-15);
    }

    #[test]
    fn closed_pair_density_matches_partial_trace() {
        let p = model(Sign::Plus, 0.5, 6);
        let s = build_state(&mps_matrices(&p), 6).unwrap().state;
        for (i, j) in [(1, 2), (1, 4), (3, 6)] {
            let brute = partial_trace_pair(&s, i, j).unwrap();
            let closed = pair_density(&p, i, j).unwrap().rho;
            assert!(max_abs(&(brute - closed)) < 1e-12);
        }
    }

    #[test]
    fn pair_density_rejects_equal_sites() {
        let p = model(Sign::Plus, 0.5, 6);
        assert!(matches!(pair_density(&p, 2, 2), Err(Error::BadSites { .. })));
        assert!(matches!(pair_density(&p, 0, 2), Err(Error::BadSites { .. })));
    }

    #[test]
    fn bell_and_mixed_concurrence() {
        let b = bell::psi_minus();
        let rho = PairDensityMatrix::new(b * b.adjoint()).unwrap();
        assert!((wootters_concurrence(&rho).unwrap().c - 1.0).abs() < 1e-12);
        let mixed = PairDensityMatrix::new(Mat4::identity() * c(0.25)).unwrap();
        assert_eq!(wootters_concurrence(&mixed).unwrap().c, 0.0);
    }

    #[test]
    fn non_positive_rejected() {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(1.0);
        m[(1, 1)] = c(0.5);
        m[(3, 3)] = c(-0.5);
        assert!(matches!(PairDensityMatrix::new(m), Err(Error::NotPositive(_))));
        let mut skew = Mat4::identity() * c(0.25);
        skew[(0, 1)] = ONE;
        assert!(matches!(PairDensityMatrix::new(skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn closed_concurrence_examples() {
        assert_eq!(concurrence_closed(1.0, 6).unwrap(), 0.0);
        assert_eq!(concurrence_closed(0.0, 9).unwrap(), 0.0);
        let v = concurrence_closed(0.5, 6).unwrap();
        assert!((v - 0.125 / 11.40625).abs() < 1e-15);
        let rho = pair_density(&model(Sign::Plus, 0.5, 6), 1, 2).unwrap();
        assert!((wootters_concurrence(&rho).unwrap().c - v).abs() < 1e-12);
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scaling_limit(0.0), 0.0);
        let want = 2.0 * (-1.0f64).exp() / 1.0f64.cosh();
        assert!((scaling_limit(1.0) - want).abs() < 1e-15);
        assert!((scaling_limit(1.0) - 0.4768116880884702).abs() < 1e-15);
        assert_eq!(scaling_limit(1.3), scaling_limit(-1.3));
        let curve = scaled_concurrence_curve(100_000, &[0.0, 1.0]).unwrap();
        assert_eq!(curve[0].1, 0.0);
        assert!((curve[1].1 / scaling_limit(1.0) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn eta_minus_pair_density_matches_explicit_state() {
        let p = model(Sign::Minus, 0.3, 6);
        let s = explicit_ground_state(&p).unwrap();
        for (i, j) in [(1, 2), (2, 5), (1, 6)] {
            let brute = partial_trace_pair(&s, i, j).unwrap();
            let closed = pair_density(&p, i, j).unwrap().rho;
            assert!(max_abs(&(brute - closed)) < 1e-12);
        }
    }
}
