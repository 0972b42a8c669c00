//! Positive definite matrices, weighted geometric means and a seeded
//! verification lab for convexity inequalities along geodesics.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod cli;
pub mod error;
pub mod geo_convex;
pub mod geometry;
pub mod io;
pub mod lab;
pub mod maps;
pub mod majorization;
pub mod norms;
pub mod random;
pub mod spectral;

pub use check::CheckResult;
pub use error::{Error, Result};
