//! Exact arithmetic over Q and F_p, dense matrices, and canonical subspaces.

mod gram;
mod matrix;
mod scalar;
mod subspace;

pub use gram::Gram;
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use subspace::Subspace;
