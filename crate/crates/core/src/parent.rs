//! Parent Hamiltonian: the two-site null space of the MPS, the local projector
//! Hamiltonian built from it, its Pauli expansion, and dense ring assembly.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, kron2, Mat2, Mat4, Pauli, Vec4, C64, ZERO};
use crate::model::{couplings_from_params, GeneralForm, ModelParams};

/// Largest ring assembled as a dense matrix.
pub const MAX_DENSE_SITES: usize = 12;

/// Relative rank tolerance used for the kernel of `M`.
pub const KERNEL_RTOL: f64 = 1e-10;

/// The linear system `sum_{ij} c_ij A_i A_j = 0` written as `M c = 0`.
///
/// Columns of `M` are ordered `c00, c01, c10, c11`; rows are the row-major
/// entries of the 2x2 product.
#[derive(Clone, Debug)]
pub struct NullSpaceProblem {
    pub m: Mat4,
    pub singular_values: [f64; 4],
    pub tolerance: f64,
    /// Orthonormal kernel basis.
    pub solutions: Vec<Vec4>,
}

impl NullSpaceProblem {
    pub fn determinant(&self) -> C64 {
        self.m.determinant()
    }

    pub fn kernel_dim(&self) -> usize {
        self.solutions.len()
    }

    pub fn kernel_projector(&self) -> Mat4 {
        self.solutions.iter().fold(Mat4::zeros(), |acc, v| acc + v * v.adjoint())
    }
}

pub fn null_space_k2(a0: &Mat2, a1: &Mat2) -> NullSpaceProblem {
    let mats = [a0, a1];
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let prod = mats[i] * mats[j];
            for r in 0..2 {
                for col in 0..2 {
                    m[(2 * r + col, 2 * i + j)] = prod[(r, col)];
                }
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut singular_values = [0.0; 4];
    for (k, s) in svd.singular_values.iter().enumerate() {
        singular_values[k] = *s;
    }
    let largest = singular_values.iter().copied().fold(0.0_f64, f64::max);
    let tolerance = KERNEL_RTOL * largest;
    let solutions = (0..4)
        .filter(|&k| singular_values[k] <= tolerance)
        .map(|k| v_t.row(k).adjoint())
        .collect();
    NullSpaceProblem { m, singular_values, tolerance, solutions }
}

/// `16 b^2 c^2 (a - d)^2 (a + d)^2`.
pub fn det_closed_form(form: &GeneralForm) -> C64 {
    let GeneralForm { a, b, c: cc, d } = *form;
    let amd = a - d;
    let apd = a + d;
    c(16.0) * b * b * cc * cc * amd * amd * apd * apd
}

/// Bell states in the `|00>, |01>, |10>, |11>` basis.
pub mod bell {
    use super::*;

    fn v(x: [f64; 4]) -> Vec4 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Vec4::new(c(x[0] * h), c(x[1] * h), c(x[2] * h), c(x[3] * h))
    }

    pub fn psi_plus() -> Vec4 {
        v([0.0, 1.0, 1.0, 0.0])
    }
    pub fn psi_minus() -> Vec4 {
        v([0.0, 1.0, -1.0, 0.0])
    }
    pub fn phi_plus() -> Vec4 {
        v([1.0, 0.0, 0.0, 1.0])
    }
    pub fn phi_minus() -> Vec4 {
        v([1.0, 0.0, 0.0, -1.0])
    }
}

/// The two unnormalized null vectors
/// `e1 = (1+eta)|psi-> + (1-eta)|phi->`, `e2 = (1+g)|psi+> - eps (1-g)|phi+>`.
pub fn e_vectors(p: &ModelParams) -> (Vec4, Vec4) {
    let eta = p.eta.value();
    let eps = p.epsilon.value();
    let e1 = bell::psi_minus() * c(1.0 + eta) + bell::phi_minus() * c(1.0 - eta);
    let e2 = bell::psi_plus() * c(1.0 + p.g) - bell::phi_plus() * c(eps * (1.0 - p.g));
    (e1, e2)
}

/// Real coefficients of `sigma_a (x) sigma_b`, indexed in [`Pauli::ALL`] order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PauliCoefficients(pub [[f64; 4]; 4]);

impl PauliCoefficients {
    pub fn get(&self, a: Pauli, b: Pauli) -> f64 {
        self.0[a as usize][b as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pauli, Pauli, f64)> + '_ {
        Pauli::ALL
            .into_iter()
            .flat_map(move |a| Pauli::ALL.into_iter().map(move |b| (a, b, self.get(a, b))))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TwoSiteOperator {
    pub h: Mat4,
    pub pauli: PauliCoefficients,
}

/// `h = J |e1><e1| + |e2><e2|` with the unnormalized null vectors.
pub fn local_h(p: &ModelParams) -> TwoSiteOperator {
    let (e1, e2) = e_vectors(p);
    let h = e1 * e1.adjoint() * c(p.j) + e2 * e2.adjoint();
    let pauli = pauli_decompose(&h).expect("projector sum is Hermitian");
    TwoSiteOperator { h, pauli }
}

/// Expands a Hermitian two-site operator as `sum_ab c_ab sigma_a (x) sigma_b`,
/// `c_ab = tr(H sigma_a (x) sigma_b) / 4`.
pub fn pauli_decompose(h: &Mat4) -> Result<PauliCoefficients> {
    let scale = h.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let defect = (h - h.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if defect > 1e-12 * scale {
        return Err(Error::NotHermitian(defect));
    }
    let mut out = [[0.0; 4]; 4];
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            let basis = kron2(&a.matrix(), &b.matrix());
            out[a as usize][b as usize] = (h * basis).trace().re / 4.0;
        }
    }
    Ok(PauliCoefficients(out))
}

pub fn pauli_reconstruct(coeffs: &PauliCoefficients) -> Mat4 {
    coeffs
        .iter()
        .fold(Mat4::zeros(), |acc, (a, b, w)| acc + kron2(&a.matrix(), &b.matrix()) * c(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HamiltonianForm {
    /// `sum_i Jx XX + Jy YY + Jz ZZ + B X_i` with the surface couplings.
    Couplings,
    /// `sum_l h_{l,l+1}`, positive semidefinite.
    Projector,
}

/// Adds `op` acting on sites `s1, s2` (0-based, site 0 most significant).
fn embed_two_site(dst: &mut DMatrix<C64>, op: &Mat4, s1: usize, s2: usize, n: usize) {
    let (sh1, sh2) = (n - 1 - s1, n - 1 - s2);
    let mask = !((1usize << sh1) | (1usize << sh2));
    for col in 0..(1usize << n) {
        let local_in = (((col >> sh1) & 1) << 1) | ((col >> sh2) & 1);
        let base = col & mask;
        for local_out in 0..4 {
            let w = op[(local_out, local_in)];
            if w != ZERO {
                let row = base | ((local_out >> 1) << sh1) | ((local_out & 1) << sh2);
                dst[(row, col)] += w;
            }
        }
    }
}

fn embed_one_site(dst: &mut DMatrix<C64>, op: &Mat2, s: usize, n: usize) {
    let sh = n - 1 - s;
    for col in 0..(1usize << n) {
        let bit = (col >> sh) & 1;
        let base = col & !(1usize << sh);
        for out in 0..2 {
            let w = op[(out, bit)];
            if w != ZERO {
                dst[(base | (out << sh), col)] += w;
            }
        }
    }
}

/// Dense ring Hamiltonian with periodic boundary (bond `(N, 1)` included).
pub fn assemble_chain_h(p: &ModelParams, form: HamiltonianForm) -> Result<DMatrix<C64>> {
    let n = p.n;
    if n > MAX_DENSE_SITES {
        return Err(Error::SizeCap { n, cap: MAX_DENSE_SITES });
    }
    let dim = 1usize << n;
    let mut h = DMatrix::from_element(dim, dim, ZERO);
    match form {
        HamiltonianForm::Projector => {
            let local = local_h(p).h;
            for l in 0..n {
                embed_two_site(&mut h, &local, l, (l + 1) % n, n);
            }
        }
        HamiltonianForm::Couplings => {
            let k = couplings_from_params(p);
            let bond = kron2(&Pauli::X.matrix(), &Pauli::X.matrix()) * c(k.jx)
                + kron2(&Pauli::Y.matrix(), &Pauli::Y.matrix()) * c(k.jy)
                + kron2(&Pauli::Z.matrix(), &Pauli::Z.matrix()) * c(k.jz);
            let field = Pauli::X.matrix() * c(k.b);
            for l in 0..n {
                embed_two_site(&mut h, &bond, l, (l + 1) % n, n);
                embed_one_site(&mut h, &field, l, n);
            }
        }
    }
    Ok(h)
}

/// Applies the same single-site unitary pattern to every site:
/// `U_ring H U_ring^dag` with `U_ring = u(1) (x) u(2) (x) ... (x) u(N)`.
pub fn conjugate_sitewise<F>(h: &DMatrix<C64>, n: usize, site_unitary: F) -> DMatrix<C64>
where
    F: Fn(usize) -> Mat2,
{
    let u = (0..n).fold(DMatrix::from_element(1, 1, c(1.0)), |acc, k| {
        let s = site_unitary(k);
        acc.kronecker(&DMatrix::from_fn(2, 2, |r, col| s[(r, col)]))
    });
    &u * h * u.adjoint()
}
