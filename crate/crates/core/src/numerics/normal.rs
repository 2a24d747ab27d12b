//! Standard normal distribution function and its logarithm.
//!
//! `normal_cdf` is backed by the `libm` complementary error function, which is
//! accurate to about one ulp across the whole real line. The logarithm switches
//! to a continued-fraction Mills ratio below `z = -8`, where `erfc` starts to
//! lose to underflow.

use std::f64::consts::{PI, SQRT_2};

/// ln(sqrt(2 pi))
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

const TAIL_SWITCH: f64 = -8.0;
const MILLS_DEPTH: usize = 80;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `ln Φ(z)`, finite for every finite `z`.
pub fn log_normal_cdf(z: f64) -> f64 {
    if z > 5.0 {
        (-0.5 * libm::erfc(z / SQRT_2)).ln_1p()
    } else if z >= TAIL_SWITCH {
        (0.5 * libm::erfc(-z / SQRT_2)).ln()
    } else {
        let x = -z;
        -0.5 * x * x - LN_SQRT_2PI + mills_ratio(x).ln()
    }
}

/// Mills ratio `Φ(-x) / φ(x)` for `x >= 0`.
///
/// Uses the Laplace continued fraction `1/(x+1/(x+2/(x+3/(x+...))))` for
/// large arguments, where it converges in a few dozen terms.
pub fn mills_ratio(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < -TAIL_SWITCH {
        return 0.5 * libm::erfc(x / SQRT_2) / normal_pdf(x);
    }
    if x.is_infinite() {
        return 0.0;
    }
    let mut t = x;
    for k in (1..=MILLS_DEPTH).rev() {
        t = x + k as f64 / t;
    }
    1.0 / t
}
