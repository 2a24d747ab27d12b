//! Parameter inference for a Wiener process whose drift and diffusion change
//! at an intervention time, observed only through the time since the process
//! started and the time from the intervention until it reaches a boundary.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod inference;
pub mod model;
pub mod numerics;
pub mod sampler;
pub mod study;

pub use error::{Error, Result};
