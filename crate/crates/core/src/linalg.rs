//! Small dense helpers shared by the physics modules.
//!
//! Basis convention used throughout the crate: `sigma_z|0> = +|0>`, and in a
//! product basis index the first site is the most significant bit.

use nalgebra::{Complex, DMatrix, DVector, Matrix2, Matrix4, Vector2, Vector4};

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Vec2 = Vector2<C64>;
pub type Vec4 = Vector4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Single-site Pauli operator labels, in the order used for Pauli expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli::I => Mat2::identity(),
            Pauli::X => Mat2::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => Mat2::new(ZERO, -I, I, ZERO),
            Pauli::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => '1',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }
}

pub fn sigma_x() -> Mat2 {
    Pauli::X.matrix()
}

pub fn sigma_y() -> Mat2 {
    Pauli::Y.matrix()
}

pub fn sigma_z() -> Mat2 {
    Pauli::Z.matrix()
}

/// `R_x(theta) = exp(-i theta sigma_x / 2)`.
pub fn rx(theta: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2::identity() * c(co) - sigma_x() * C64::new(0.0, s)
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

pub fn kron_vec2(a: &Vec2, b: &Vec2) -> Vec4 {
    Vec4::from_fn(|r, _| a[r / 2] * b[r % 2])
}

/// General dense Kronecker product.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    a.kronecker(b)
}

pub fn to_dmatrix2(m: &Mat2) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |r, col| m[(r, col)])
}

pub fn max_abs<R, Co, S>(m: &nalgebra::Matrix<C64, R, Co, S>) -> f64
where
    R: nalgebra::Dim,
    Co: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, Co>,
{
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry-wise deviation `max |H - H^dag|`.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for col in r..n {
            worst = worst.max((m[(r, col)] - m[(col, r)].conj()).norm());
        }
    }
    worst
}

pub fn frobenius2(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonal projector onto the column span of `cols` (Gram-Schmidt, drops
/// numerically dependent columns).
pub fn span_projector(cols: &[Vec4], tol: f64) -> Mat4 {
    let mut basis: Vec<Vec4> = Vec::new();
    for v in cols {
        let mut w = *v;
        for b in &basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
        let n = w.norm();
        if n > tol {
            basis.push(w / c(n));
        }
    }
    basis
        .iter()
        .fold(Mat4::zeros(), |acc, b| acc + b * b.adjoint())
}

/// Index of a spin configuration with site 1 as the most significant bit.
pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1))
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as u8).collect()
}
