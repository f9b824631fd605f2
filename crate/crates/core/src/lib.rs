//! Exact propagators and a numeric reference engine for 1D tight-binding
//! lattices under homogeneous time-dependent driving.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bessel;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod numeric;
pub mod quadrature;
pub mod scenarios;

pub use error::{Error, Result};
