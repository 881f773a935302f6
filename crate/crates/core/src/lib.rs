//! Recognition of series-parallel binary and ternary matrices.
//!
//! A matrix is series-parallel if it can be emptied by repeatedly deleting a
//! row or column that is zero, has a single nonzero, or duplicates another
//! row or column (up to sign for ternary matrices). This crate computes such
//! reduction sequences in expected linear time and, for matrices that are not
//! series-parallel, extracts a small forbidden submatrix that certifies it.

pub mod generator;
pub mod hashing;
pub mod matrix;
pub mod reduce;
pub mod ternary;
pub mod verify;
pub mod wheel;

pub use generator::{generate, ExtensionOrder, GenConfig, GenError};
pub use hashing::{Sign, WeightMode};
pub use matrix::{DenseMatrix, Element, MatrixError, Mode, SparseMatrix};
pub use reduce::{
    reduce, replay_step, QueueOrder, ReduceOptions, ReduceOutcome, Reduction, ReductionKind, ReplayError,
};
pub use ternary::{certify_ternary, support, TernaryCertificate, TernarySearch};
pub use verify::{
    oracle_is_series_parallel, verify_n2, verify_reductions, verify_wheel, OracleVerdict, WheelCheckMode, WheelInfo,
};
pub use wheel::{
    minimalize_certificate, search_wheel, wheel_matrix, wheel_prime_matrix, BinaryCertificate, SearchError,
    WheelCertificate, WheelKind, WheelSearch,
};
