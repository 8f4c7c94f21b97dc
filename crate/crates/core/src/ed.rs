//! Dense exact diagonalization, used as the ground-truth oracle for energies
//! and ground spaces of small rings.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_defect, C64};
use crate::model::ModelParams;
use crate::mps::PureState;
use crate::parent::{assemble_chain_h, HamiltonianForm};

pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub ground_space_dim: usize,
    /// Orthonormal basis of the ground space, one column per vector.
    pub ground_vectors: DMatrix<C64>,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Full spectrum of a Hermitian matrix. Real input (the case for every ring
/// Hamiltonian in this family) goes through the real symmetric solver.
pub fn dense_spectrum(h: &DMatrix<C64>, degeneracy_tol: f64) -> Result<SpectrumResult> {
    if h.nrows() != h.ncols() {
        return Err(Error::Dimension { expected: h.nrows(), got: h.ncols() });
    }
    let defect = hermitian_defect(h);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let dim = h.nrows();
    let is_real = h.iter().all(|z| z.im == 0.0);

    let (values, vectors): (Vec<f64>, DMatrix<C64>) = if is_real {
        let re = DMatrix::from_fn(dim, dim, |r, col| 0.5 * (h[(r, col)].re + h[(col, r)].re));
        let eig = re.symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors.map(c))
    } else {
        let herm = (h + h.adjoint()) * c(0.5);
        let eig = herm.symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let e0 = eigenvalues[0];
    let ground: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| values[k] - e0 <= degeneracy_tol)
        .collect();
    let ground_vectors = DMatrix::from_fn(dim, ground.len(), |r, col| vectors[(r, ground[col])]);
    Ok(SpectrumResult { eigenvalues, ground_space_dim: ground.len(), ground_vectors })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Membership {
    /// `|| H psi - <psi|H|psi> psi ||`.
    pub residual: f64,
    /// `|| P_ground psi ||`.
    pub overlap: f64,
    pub energy: f64,
}

pub fn ground_membership_in(
    h: &DMatrix<C64>,
    spectrum: &SpectrumResult,
    psi: &PureState,
) -> Result<Membership> {
    if psi.amplitudes.len() != h.ncols() {
        return Err(Error::Dimension { expected: h.ncols(), got: psi.amplitudes.len() });
    }
    if !psi.is_normalized(1e-10) {
        return Err(Error::NotNormalized(psi.norm()));
    }
    let v = &psi.amplitudes;
    let hv: DVector<C64> = h * v;
    let energy = v.dotc(&hv);
    let residual = (&hv - v * energy).norm();
    let proj = spectrum.ground_vectors.adjoint() * v;
    Ok(Membership { residual, overlap: proj.norm(), energy: energy.re })
}

pub fn ground_membership(h: &DMatrix<C64>, psi: &PureState, degeneracy_tol: f64) -> Result<Membership> {
    let spectrum = dense_spectrum(h, degeneracy_tol)?;
    ground_membership_in(h, &spectrum, psi)
}

/// Measured ground-space dimension of the projector-form ring Hamiltonian
/// along a grid of `g` values.
pub fn ground_degeneracy_scan(p: &ModelParams, g_grid: &[f64]) -> Result<Vec<(f64, usize)>> {
    if p.n > 10 {
        return Err(Error::SizeCap { n: p.n, cap: 10 });
    }
    g_grid
        .iter()
        .map(|&g| {
            let h = assemble_chain_h(&p.with_g(g), HamiltonianForm::Projector)?;
            Ok((g, dense_spectrum(&h, DEFAULT_DEGENERACY_TOL)?.ground_space_dim))
        })
        .collect()
}
