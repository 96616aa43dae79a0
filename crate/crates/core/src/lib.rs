//! Numerical solver and verification harness for the singular semilinear
//! heat equation u_t - Δu = |x|^{-γ} u^q with 0 < q < 1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod fields;
pub mod initial;
pub mod quadrature;
pub mod scheme;
pub mod semigroup;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{Grid, GridFunction, Params};
pub use initial::InitialData;
