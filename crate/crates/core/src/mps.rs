//! Trace-formula amplitudes, dense state construction, transfer matrices and
//! the explicit ground states.
//!
//! Site indices in the public functions are 1-based, matching the usual
//! physics labelling of a ring `1..=N`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{c, kron2, Mat2, Mat4, Vec2, C64, I, ONE, ZERO};
use crate::model::{ModelParams, MpsTensors, Sign};

/// Largest ring for which a dense state vector is built.
pub const MAX_STATE_SITES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    pub amplitudes: DVector<C64>,
    pub n: usize,
}

impl PureState {
    pub fn new(amplitudes: DVector<C64>, n: usize) -> Result<Self> {
        let expected = 1usize << n;
        if amplitudes.len() != expected {
            return Err(Error::Dimension { expected, got: amplitudes.len() });
        }
        Ok(Self { amplitudes, n })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Unit norm, first non-negligible amplitude real and positive.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        let biggest = self.amplitudes.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        let anchor = self
            .amplitudes
            .iter()
            .find(|z| z.norm() > 1e-12 * biggest)
            .copied()
            .unwrap_or(ONE);
        let phase = anchor.conj() / c(anchor.norm());
        self.amplitudes *= phase / c(norm);
        Ok(self)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Applies a single-site operator at `site` (1-based).
    pub fn apply_site(&self, op: &Mat2, site: usize) -> PureState {
        let shift = self.n - site;
        let mut out = DVector::from_element(self.amplitudes.len(), ZERO);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            if *amp == ZERO {
                continue;
            }
            let bit = (idx >> shift) & 1;
            let base = idx & !(1 << shift);
            for row in 0..2 {
                let coef = op[(row, bit)];
                if coef != ZERO {
                    out[base | (row << shift)] += coef * amp;
                }
            }
        }
        PureState { amplitudes: out, n: self.n }
    }

    /// `<psi| O_1(s_1) O_2(s_2) ... |psi>` for operators on distinct sites.
    pub fn expectation(&self, ops: &[(usize, Mat2)]) -> C64 {
        let mut phi = self.clone();
        for (site, op) in ops {
            phi = phi.apply_site(op, *site);
        }
        self.overlap(&phi)
    }
}

/// Unnormalized amplitude `tr(A_{i1} A_{i2} ... A_{iN})`.
pub fn amplitude(t: &MpsTensors, bits: &[u8]) -> C64 {
    bits.iter()
        .fold(Mat2::identity(), |acc, &b| acc * t.site(b))
        .trace()
}

#[derive(Clone, Debug)]
pub struct MpsState {
    pub state: PureState,
    /// `tr(E^N)`.
    pub z_transfer: f64,
    /// `sum |tr(...)|^2` over all configurations.
    pub z_direct: f64,
}

/// Builds the normalized dense state of an `n`-site ring from the trace formula.
pub fn build_state(t: &MpsTensors, n: usize) -> Result<MpsState> {
    if n > MAX_STATE_SITES {
        return Err(Error::SizeCap { n, cap: MAX_STATE_SITES });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("ring size must be positive".into()));
    }
    let mut amps = vec![ZERO; 1 << n];
    fill_amplitudes(t, n, 0, Mat2::identity(), 0, &mut amps);
    let z_direct: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if !(z_direct > 0.0) {
        return Err(Error::DegenerateState);
    }
    let e = transfer_matrix(t).e;
    let z_transfer = mat_pow(&e, n).trace().re;
    if (z_transfer - z_direct).abs() > 1e-9 * z_direct.max(z_transfer.abs()) {
        return Err(Error::NormalizationMismatch { transfer: z_transfer, direct: z_direct });
    }
    let state = PureState::new(DVector::from_vec(amps), n)?.normalized()?;
    Ok(MpsState { state, z_transfer, z_direct })
}

fn fill_amplitudes(
    t: &MpsTensors,
    n: usize,
    depth: usize,
    prefix: Mat2,
    idx: usize,
    out: &mut [C64],
) {
    if depth == n {
        out[idx] = prefix.trace();
        return;
    }
    for bit in 0..2u8 {
        fill_amplitudes(t, n, depth + 1, prefix * t.site(bit), (idx << 1) | bit as usize, out);
    }
}

pub(crate) fn mat_pow(m: &Mat4, mut exp: usize) -> Mat4 {
    let mut base = *m;
    let mut acc = Mat4::identity();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub e: Mat4,
}

impl TransferMatrix {
    /// Eigenvalues from a complex Schur decomposition, unordered.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.e
            .schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .unwrap_or_default()
    }

    /// Eigenvalues sorted by decreasing real part (the model spectrum is real).
    pub fn sorted_real_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// `E = sum_i conj(A_i) (x) A_i`.
pub fn transfer_matrix(t: &MpsTensors) -> TransferMatrix {
    TransferMatrix {
        e: kron2(&t.a0.conjugate(), &t.a0) + kron2(&t.a1.conjugate(), &t.a1),
    }
}

/// `E_O = sum_{ij} <i|O|j> conj(A_i) (x) A_j`.
pub fn transfer_with_operator(t: &MpsTensors, op: &Mat2) -> TransferMatrix {
    let mut e = Mat4::zeros();
    for i in 0..2u8 {
        for j in 0..2u8 {
            let w = op[(i as usize, j as usize)];
            if w != ZERO {
                e += kron2(&t.site(i).conjugate(), t.site(j)) * w;
            }
        }
    }
    TransferMatrix { e }
}

fn transfer_scale(e: &Mat4) -> f64 {
    let s = (0..4)
        .map(|r| (0..4).map(|col| e[(r, col)].norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// `tr(E^{k-1} E_O E^{N-k}) / tr(E^N)` for a site `k` in `1..=n`.
pub fn expectation_one_point(t: &MpsTensors, op: &Mat2, k: usize, n: usize) -> Result<C64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("site {k} outside 1..={n}")));
    }
    let e = transfer_matrix(t).e;
    let s = c(transfer_scale(&e));
    let (e, eo) = (e / s, transfer_with_operator(t, op).e / s);
    let num = (mat_pow(&e, k - 1) * eo * mat_pow(&e, n - k)).trace();
    let den = mat_pow(&e, n).trace();
    Ok(num / den)
}

/// `<O_a(1) O_b(r)>` = `tr(E_Oa E^{r-2} E_Ob E^{N-r}) / tr(E^N)` for `r` in `2..=n`.
pub fn expectation_two_point(
    t: &MpsTensors,
    op_a: &Mat2,
    op_b: &Mat2,
    r: usize,
    n: usize,
) -> Result<C64> {
    if r < 2 || r > n {
        return Err(Error::InvalidParameter(format!("second site {r} outside 2..={n}")));
    }
    let e = transfer_matrix(t).e;
    let s = c(transfer_scale(&e));
    let e = e / s;
    let ea = transfer_with_operator(t, op_a).e / s;
    let eb = transfer_with_operator(t, op_b).e / s;
    let num = (ea * mat_pow(&e, r - 2) * eb * mat_pow(&e, n - r)).trace();
    let den = mat_pow(&e, n).trace();
    Ok(num / den)
}

/// `sqrt(g)`, continued to `i sqrt(-g)` for negative `g`.
pub fn sqrt_g(g: f64) -> C64 {
    if g >= 0.0 {
        c(g.sqrt())
    } else {
        I * (-g).sqrt()
    }
}

/// Unnormalized single-site factors `(|phi+>, |phi->)` of the `eta = +1`
/// ground state, `(1 +- sqrt g)|0> + eps (1 -+ sqrt g)|1>`.
pub fn phi_vectors(epsilon: Sign, g: f64) -> (Vec2, Vec2) {
    let s = sqrt_g(g);
    let e = c(epsilon.value());
    (Vec2::new(ONE + s, e * (ONE - s)), Vec2::new(ONE - s, e * (ONE + s)))
}

/// Unnormalized `(|chi+>, |chi->)` for `eta = -1`:
/// `(1 + sqrt g)|y,+-> +- i (1 - sqrt g)|y,-+>`, with `eps` on the `|1>` part.
pub fn chi_vectors(epsilon: Sign, g: f64) -> (Vec2, Vec2) {
    let s = sqrt_g(g);
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    let y_plus = Vec2::new(h, I * h);
    let y_minus = Vec2::new(h, -I * h);
    let chi_p = y_plus * (ONE + s) + y_minus * (I * (ONE - s));
    let chi_m = y_minus * (ONE + s) - y_plus * (I * (ONE - s));
    let e = c(epsilon.value());
    let flip = |v: Vec2| Vec2::new(v[0], v[1] * e);
    (flip(chi_p), flip(chi_m))
}

/// `2^{N+1} ((1+g)^N + (1-g)^N)`, the squared norm of `|phi+>^N + |phi->^N`.
pub fn explicit_norm_sq(g: f64, n: usize) -> f64 {
    let n_i = n as i32;
    2f64.powi(n_i + 1) * ((1.0 + g).powi(n_i) + (1.0 - g).powi(n_i))
}

/// Sum of two product states, `prod_k first[k] + prod_k second[k]`, with the
/// factor at site `k` chosen by `pick(k)`.
fn two_product_state<F>(n: usize, pick: F) -> DVector<C64>
where
    F: Fn(usize) -> (Vec2, Vec2),
{
    let factors: Vec<(Vec2, Vec2)> = (0..n).map(&pick).collect();
    DVector::from_fn(1 << n, |idx, _| {
        let (mut a, mut b) = (ONE, ONE);
        for (k, (fa, fb)) in factors.iter().enumerate() {
            let bit = (idx >> (n - 1 - k)) & 1;
            a *= fa[bit];
            b *= fb[bit];
        }
        a + b
    })
}

/// Closed-form ground state of the model on an `N`-site ring.
pub fn explicit_ground_state(p: &ModelParams) -> Result<PureState> {
    p.require_even_for_eta_minus()?;
    if p.n > MAX_STATE_SITES {
        return Err(Error::SizeCap { n: p.n, cap: MAX_STATE_SITES });
    }
    let amps = match p.eta {
        Sign::Plus => {
            let (plus, minus) = phi_vectors(p.epsilon, p.g);
            two_product_state(p.n, |_| (plus, minus))
        }
        Sign::Minus => {
            let (plus, minus) = chi_vectors(p.epsilon, p.g);
            two_product_state(p.n, |k| if k % 2 == 0 { (plus, minus) } else { (minus, plus) })
        }
    };
    PureState::new(amps, p.n)?.normalized()
}

/// `Phi_mn = (A0 A_m + (-1)^n A1 A_{1+m}) / sqrt 2`, indexed `[m][n]`.
pub fn bell_pair_matrices(t: &MpsTensors) -> [[Mat2; 2]; 2] {
    let h = c(std::f64::consts::FRAC_1_SQRT_2);
    let pair = |m: u8, sign: f64| (t.a0 * t.site(m) + t.a1 * t.site((m + 1) % 2) * c(sign)) * h;
    [[pair(0, 1.0), pair(0, -1.0)], [pair(1, 1.0), pair(1, -1.0)]]
}
