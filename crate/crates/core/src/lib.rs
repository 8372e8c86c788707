//! Structured products of (block) positive semidefinite matrices and log-space
//! evaluation of Oppenheim-type determinantal lower bounds.
//!
//! * [`dense`]: complex matrices, Kronecker/Hadamard products, Cholesky and LU determinants.
//! * [`block`]: block matrices and the Khatri-Rao product.
//! * [`bounds`]: every inequality evaluated as an [`bounds::InequalityReport`].
//! * [`gen`]: portable seeded generation of PD/PSD instances.
//! * [`harness`]: sampled verification suites, reduction checks and replay.

pub mod block;
pub mod bounds;
pub mod dense;
pub mod error;
pub mod gen;
pub mod harness;
pub mod logspace;

pub use block::BlockMatrix;
pub use dense::{LogDet, Matrix, Scalar};
pub use error::{Error, Result};
