//! Independent reference implementations used only by the integration tests.
//! Everything here works on raw basis indices and never calls into the
//! library's state, Hamiltonian or entanglement code.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Matrix4};

pub type C = Complex<f64>;

pub fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Site `k` (1-based) is the most significant of `n` bits.
pub fn bit(idx: usize, k: usize, n: usize) -> usize {
    (idx >> (n - k)) & 1
}

pub fn model_tensors(eps: f64, eta: f64, g: f64) -> (Matrix2<C>, Matrix2<C>) {
    let a0 = Matrix2::new(re(1.0), re(g), re(1.0), re(eta));
    let a1 = Matrix2::new(re(1.0), re(-g), re(-1.0), re(eta)) * re(eps);
    (a0, a1)
}

pub struct RingCouplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub b: f64,
    pub c0: f64,
}

pub fn ring_couplings(eps: f64, eta: f64, g: f64, j: f64) -> RingCouplings {
    RingCouplings {
        jx: -j + (1.0 + g * g) / 2.0,
        jy: -eta * j + g,
        jz: -eta * j - g,
        b: eps * (g * g - 1.0),
        c0: j + (1.0 + g * g) / 2.0,
    }
}

/// `sum_i Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1} + B X_i` on a ring,
/// built entry by entry from the action on basis states.
pub fn ring_h(k: &RingCouplings, n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    let sign = |b: usize| if b == 0 { 1.0 } else { -1.0 };
    for s in 0..dim {
        for i in 1..=n {
            let j = i % n + 1;
            let (bi, bj) = (bit(s, i, n), bit(s, j, n));
            let mi = 1usize << (n - i);
            let mj = 1usize << (n - j);
            let flipped = s ^ mi ^ mj;
            h[(s, s)] += k.jz * sign(bi) * sign(bj);
            h[(flipped, s)] += k.jx;
            // Y|b> = i (-1)^b |1-b>
            h[(flipped, s)] += -k.jy * sign(bi) * sign(bj);
            h[(s ^ mi, s)] += k.b;
        }
    }
    h
}

pub fn lowest_eigenvalue(h: &DMatrix<f64>) -> f64 {
    h.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Normalized `tr(A_{s1} ... A_{sN})` for every basis state.
pub fn trace_state(a0: &Matrix2<C>, a1: &Matrix2<C>, n: usize) -> DVector<C> {
    let dim = 1usize << n;
    let mut v = DVector::from_fn(dim, |s, _| {
        let mut m = Matrix2::identity();
        for k in 1..=n {
            m *= if bit(s, k, n) == 0 { a0 } else { a1 };
        }
        m.trace()
    });
    let norm = v.norm();
    v /= re(norm);
    v
}

pub fn overlap_abs(a: &DVector<C>, b: &DVector<C>) -> f64 {
    a.dotc(b).norm()
}

pub fn pauli(label: char) -> Matrix2<C> {
    let (o, l, i) = (re(0.0), re(1.0), C::new(0.0, 1.0));
    match label {
        'I' => Matrix2::new(l, o, o, l),
        'X' => Matrix2::new(o, l, l, o),
        'Y' => Matrix2::new(o, -i, i, o),
        'Z' => Matrix2::new(l, o, o, -l),
        _ => panic!("unknown Pauli {label}"),
    }
}

/// `exp(-i theta sigma_x / 2)`.
pub fn rx(theta: f64) -> Matrix2<C> {
    pauli('I') * re((theta / 2.0).cos()) - pauli('X') * C::new(0.0, (theta / 2.0).sin())
}

pub fn kron2(a: &Matrix2<C>, b: &Matrix2<C>) -> Matrix4<C> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn kron_all(ops: &[Matrix2<C>]) -> DMatrix<C> {
    let mut out = DMatrix::from_element(1, 1, re(1.0));
    for op in ops {
        let (r0, c0) = out.shape();
        out = DMatrix::from_fn(r0 * 2, c0 * 2, |r, c| out[(r / 2, c / 2)] * op[(r % 2, c % 2)]);
    }
    out
}

/// `<psi| prod_k O_k |psi>` with operators on distinct 1-based sites.
pub fn expect(psi: &DVector<C>, n: usize, ops: &[(usize, Matrix2<C>)]) -> C {
    let dim = 1usize << n;
    let mut phi = psi.clone();
    for (site, op) in ops {
        let mut next = DVector::from_element(dim, re(0.0));
        for s in 0..dim {
            let b = bit(s, *site, n);
            let mask = 1usize << (n - site);
            for out in 0..2 {
                let t = if out == b { s } else { s ^ mask };
                next[t] += op[(out, b)] * phi[s];
            }
        }
        phi = next;
    }
    psi.dotc(&phi)
}

/// Reduced density matrix of sites `i < j`, indexed `2 b_i + b_j`.
pub fn pair_rdm(psi: &DVector<C>, n: usize, i: usize, j: usize) -> Matrix4<C> {
    let dim = 1usize << n;
    let mut rho = Matrix4::zeros();
    let (mi, mj) = (1usize << (n - i), 1usize << (n - j));
    for s in 0..dim {
        if s & (mi | mj) != 0 {
            continue;
        }
        for a in 0..4 {
            let sa = s | if a & 2 != 0 { mi } else { 0 } | if a & 1 != 0 { mj } else { 0 };
            for b in 0..4 {
                let sb = s | if b & 2 != 0 { mi } else { 0 } | if b & 1 != 0 { mj } else { 0 };
                rho[(a, b)] += psi[sa] * psi[sb].conj();
            }
        }
    }
    rho
}

/// Concurrence from the singular values of `sqrt(rho) * sqrt(rho_tilde)`,
/// `rho_tilde = (Y x Y) rho^* (Y x Y)`.
pub fn concurrence(rho: &Matrix4<C>) -> f64 {
    let herm = (rho + rho.adjoint()) * re(0.5);
    let eig = herm.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|x| re(x.max(0.0).sqrt()));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let yy = kron2(&pauli('Y'), &pauli('Y'));
    let sqrt_tilde = yy * sqrt_rho.conjugate() * yy;
    let mut s: Vec<f64> = (sqrt_rho * sqrt_tilde).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

pub fn concurrence_formula(g: f64, n: usize) -> f64 {
    let a = g.abs();
    let num = 4.0 * a * (1.0 - a).abs().powi(n as i32 - 2);
    num / ((1.0 + g).powi(n as i32) + (1.0 - g).powi(n as i32)).abs()
}

pub fn scaling_formula(g: f64) -> f64 {
    2.0 * g.abs() * (-g.abs()).exp() / g.cosh()
}

/// Orthogonal projector onto the column span.
pub fn span_projector(cols: &[DVector<C>]) -> DMatrix<C> {
    let m = DMatrix::from_columns(cols);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 1e-12 * smax).collect();
    let basis = DMatrix::from_fn(u.nrows(), keep.len(), |r, c| u[(r, keep[c])]);
    &basis * basis.adjoint()
}

pub fn max_abs<R: nalgebra::Dim, Cc: nalgebra::Dim, S: nalgebra::RawStorage<C, R, Cc>>(
    m: &nalgebra::Matrix<C, R, Cc, S>,
) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub const CLASSES: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
