//! Generalized numerical radius `w_N` and generalized Euclidean operator
//! radius `w_(N,e)` of square complex matrices, with an executable registry
//! of the classical and generalized radius inequalities.

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod matrix;
pub mod norms;
pub mod radius;
pub mod rng;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
pub use inequalities::{InequalityCheck, Status, Verdict};
pub use matrix::{ComplexScalar, Matrix};
pub use norms::{NormDescriptor, NormFlags, NormKind};
pub use radius::{RadiusOptions, RadiusResult};
