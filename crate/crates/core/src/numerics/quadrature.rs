//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::numerics::roots::find_root;

/// Subdivision budget of [`integrate`].
pub const MAX_SUBDIVISIONS: usize = 10_000;

/// Relative drop of the integrand envelope at which infinite ranges are cut.
pub const TAIL_DROP: f64 = 1e-14;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Quadrature estimate together with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut k15 = fc * WGK[7];
    let mut g7 = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        k15 += WGK[j] * pair;
        if j % 2 == 1 {
            g7 += WG[j / 2] * pair;
        }
    }
    let value = k15 * half;
    let error = ((k15 - g7) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[lower, upper]`.
///
/// `upper` may be `f64::INFINITY`; the range is then cut where `|f|` has
/// dropped below [`TAIL_DROP`] times the largest value seen while scanning
/// outwards (see [`tail_cutoff`]). Fails with `NonConvergence` if the error
/// estimate does not reach `rel_tol * |I|` within [`MAX_SUBDIVISIONS`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64, rel_tol: f64) -> Result<f64> {
    let upper = if upper.is_infinite() {
        let scale = if lower.abs() > 1.0 { lower.abs() } else { 1.0 };
        tail_cutoff(|x| f(x).abs().ln(), lower, scale, TAIL_DROP)?
    } else {
        upper
    };
    integrate_with(&f, lower, upper, rel_tol, 0.0).map(|e| e.value)
}

/// Full-control variant: stops once the error is below `max(rel_tol |I|, abs_tol)`.
pub fn integrate_with<F: Fn(f64) -> f64>(
    f: &F,
    lower: f64,
    upper: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Estimate> {
    if !(lower.is_finite() && upper.is_finite()) {
        return Err(Error::InvalidParameter(format!("integration bounds [{lower}, {upper}] must be finite")));
    }
    if lower == upper {
        return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if upper < lower {
        return integrate_with(f, upper, lower, rel_tol, abs_tol).map(|e| Estimate { value: -e.value, ..e });
    }
    let first = kronrod(f, lower, upper);
    if !first.value.is_finite() {
        return Err(Error::NonFinite(format!("integrand on [{lower}, {upper}]")));
    }
    let mut total = first.value;
    let mut total_err = first.error;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    // Segments too narrow to split further.
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    heap.push(first);

    let mut splits = 0;
    loop {
        let tol = (rel_tol * total.abs()).max(abs_tol);
        if total_err <= tol || total_err <= 50.0 * f64::EPSILON * total.abs() {
            return Ok(Estimate { value: total, error: total_err, evaluations });
        }
        let Some(worst) = heap.pop() else {
            // Only frozen segments remain: round-off limited.
            return Ok(Estimate { value: total, error: total_err, evaluations });
        };
        if splits >= MAX_SUBDIVISIONS {
            return Err(Error::NonConvergence { estimate: total, error: total_err });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-13 * worst.a.abs().max(worst.b.abs()) {
            frozen_value += worst.value;
            frozen_err += worst.error;
            continue;
        }
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        evaluations += 30;
        splits += 1;
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::NonFinite(format!("integrand on [{}, {}]", worst.a, worst.b)));
        }
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Recompute from scratch now and then to keep the running sums honest.
        if splits % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum::<f64>() + frozen_value;
            total_err = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
        }
    }
}

/// Finds a point `x > start` where `ln_f(x)` has fallen `ln(1/drop)` below the
/// largest value seen on the scan.
///
/// The scan doubles the distance from `start` (beginning at `scale`) until the
/// log-envelope is below the threshold, then refines with root finding.
pub fn tail_cutoff<G: Fn(f64) -> f64>(ln_f: G, start: f64, scale: f64, drop: f64) -> Result<f64> {
    let ln_drop = drop.ln();
    let mut peak = ln_f(start);
    let mut step = scale;
    let mut prev = start;
    // Probe a few interior points so a rising integrand near `start` sets the peak.
    for k in 1..=8 {
        let x = start + scale * k as f64 / 8.0;
        let v = ln_f(x);
        if v.is_finite() {
            peak = peak.max(v);
        }
    }
    for _ in 0..200 {
        let x = start + step;
        let v = ln_f(x);
        if v.is_finite() && v > peak {
            peak = v;
        }
        // an integrand that underflows near `start` has no peak yet; keep going
        if peak == f64::NEG_INFINITY {
            prev = x;
            step *= 2.0;
            continue;
        }
        if v == f64::NEG_INFINITY || v < peak + ln_drop {
            if v == f64::NEG_INFINITY {
                return Ok(x);
            }
            let target = peak + ln_drop;
            return find_root(|y| ln_f(y) - target, prev, x, 1e-9 * x.abs().max(1.0)).or(Ok(x));
        }
        prev = x;
        step *= 2.0;
    }
    if peak == f64::NEG_INFINITY {
        // zero everywhere in floating point
        return Ok(start + scale);
    }
    Err(Error::NonConvergence { estimate: f64::NAN, error: f64::INFINITY })
}
