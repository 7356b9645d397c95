//! Taylor measures and integrals, the discrete Taylor transform (DTT) and
//! its inverses, Vandermonde machinery, DFT/NTT special cases, and the
//! message and image pipelines built on them.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod dft;
pub mod dtt;
pub mod error;
pub mod generators;
pub mod imagelab;
pub mod scalar;
pub mod seqio;
pub mod taylor;
pub mod vandermonde;

pub use dtt::{dtt_driven, dtt_point, dttmi, idtt_system, Driver, InverseSystem};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use taylor::{IndexSet, Sequence, TaylorMeasure};
