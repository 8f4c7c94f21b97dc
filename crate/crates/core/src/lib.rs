//! Exact matrix-product ground states of a two-parameter family of spin-1/2
//! XYZ rings in a transverse field.
//!
//! The crate covers the whole pipeline: the coupling surface and the
//! bond-dimension-2 tensors ([`model`]), trace-formula states and transfer
//! matrices ([`mps`]), the parent Hamiltonian ([`parent`]), closed-form
//! observables ([`observables`]), pairwise entanglement ([`entanglement`]),
//! and a dense exact-diagonalization oracle ([`ed`]). [`sweep`] and
//! [`verify`] back the `xyz-ring` command-line tool.

pub mod ed;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod model;
pub mod mps;
pub mod observables;
pub mod parent;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ModelParams, MpsTensors, Sign};
pub use mps::PureState;
