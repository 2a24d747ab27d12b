//! Scalar numerical kernels: normal CDF in linear and log scale, adaptive
//! quadrature, bracketed root finding, finite-difference Hessians and SPD
//! inversion. Everything here is pure and reentrant.

mod hessian;
mod logsum;
mod matrix;
mod normal;
mod quadrature;
mod roots;

pub use hessian::{default_steps, numeric_hessian};
pub use logsum::{ln_diff_exp, signed_log_sum, LogSum, SignedLog};
pub use matrix::{spd_inverse, SquareMatrix};
pub use normal::{log_normal_cdf, mills_ratio, normal_cdf, normal_pdf, LN_SQRT_2PI};
pub use quadrature::{integrate, integrate_with, tail_cutoff, Estimate, MAX_SUBDIVISIONS, TAIL_DROP};
pub use roots::{find_root, ROOT_TOL};
