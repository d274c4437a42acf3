//! Trigonometric classical r-matrix of the deformed gl(2|2) loop algebra.
//!
//! The crate builds the fundamental r-matrix from closed-form data and checks
//! the identities it must satisfy: coefficient relations, the classical
//! Yang–Baxter equation, Jacobi identities of the deformed loop algebra,
//! affine consistency, discrete symmetries and the degenerate limits.

// `!(x > 0.0)` is used on purpose so that NaN is rejected; index loops mirror
// the component formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod fundrep;
pub mod limits;
pub mod numeric;
pub mod params;
pub mod rmatrix;
pub mod sampling;
pub mod superlinalg;
pub mod symmetries;

pub use error::{Error, Result};
