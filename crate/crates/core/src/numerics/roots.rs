use crate::error::{Error, Result};

/// Default abscissa tolerance for root finding.
pub const ROOT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 200;

/// Brent's bracketed root finder: bisection safeguarding secant and inverse
/// quadratic interpolation steps.
///
/// Returns `x` inside `[lo, hi]` such that the sign change of `g` is located
/// to within `tol`. Fails with `BadBracket` when `g(lo)` and `g(hi)` share a
/// sign.
pub fn find_root<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::NonFinite(format!("root function at bracket [{lo}, {hi}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BadBracket { lo, hi, g_lo: fa, g_hi: fb });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
        if fb.is_nan() {
            return Err(Error::NonFinite(format!("root function at {b}")));
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = find_root(|x| x - 0.5, 0.0, 1.0, ROOT_TOL).unwrap();
        assert!((x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, 1.0, 2.0, ROOT_TOL).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bad_bracket() {
        let r = find_root(|x| x * x + 1.0, -1.0, 1.0, ROOT_TOL);
        assert!(matches!(r, Err(Error::BadBracket { .. })));
    }

    #[test]
    fn flat_tail_function() {
        // Saturating function with a nearly flat right end, like a CDF.
        let g = |x: f64| 1.0 - (-x).exp() - 0.999_999;
        let x = find_root(g, 0.0, 50.0, ROOT_TOL).unwrap();
        assert!((x - 1e6f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(find_root(|x| x, 0.0, 1.0, ROOT_TOL).unwrap(), 0.0);
    }
}
