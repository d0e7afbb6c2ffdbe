//! Multiplicative self-decompositions of the exponential, gamma and
//! half-normal laws, with M-Wright, Fox H and Wright residual densities:
//! special functions, Mellin transforms, samplers and numerical checks.

// `!(x > 0.0)` is the NaN-rejecting form used throughout for validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep every printed digit
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod distributions;
pub mod error;
pub mod mellin;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
