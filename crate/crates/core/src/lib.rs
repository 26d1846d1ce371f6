//! Numerical checks for geometric quantization on model Kähler phase spaces.

// negated float comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fresnel;
pub mod hermite;
pub mod operators;
pub mod pairing;
pub mod phase_space;
pub mod prequant;
pub mod quadrature;
pub mod report;
pub mod szego;

pub use error::{Error, Result};
