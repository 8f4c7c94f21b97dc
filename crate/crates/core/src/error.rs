use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ring size {n} exceeds the dense cap of {cap} sites")]
    SizeCap { n: usize, cap: usize },

    #[error("the eta = -1 ground state needs an even ring size, got N = {0}")]
    OddRing(usize),

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("every amplitude vanishes for this choice of tensors")]
    DegenerateState,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("site indices must be distinct and in 1..={n}, got ({i}, {j})")]
    BadSites { i: usize, j: usize, n: usize },

    #[error("normalization mismatch: tr(E^N) = {transfer}, amplitude sum = {direct}")]
    NormalizationMismatch { transfer: f64, direct: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
