//! Exact symbolic analysis of Monge-Ampère exterior differential systems.
//!
//! Everything here is pure computation over `alloc`; file formats, the text
//! front-end and the command-line driver live in the `monge` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod forms;
pub mod integrals;
pub mod ma;
pub mod pfaff;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Chart, Poly, Rational, ScalarExpr};
