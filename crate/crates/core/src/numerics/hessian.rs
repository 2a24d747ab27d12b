use crate::error::{Error, Result};
use crate::numerics::matrix::SquareMatrix;

/// Central-difference steps `max(1e-4 |x_i|, 1e-6)`.
pub fn default_steps(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| (1e-4 * v.abs()).max(1e-6)).collect()
}

/// Central second-difference Hessian of `f` at `x`, symmetrized.
pub fn numeric_hessian<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], steps: &[f64]) -> Result<SquareMatrix> {
    let d = x.len();
    if steps.len() != d || steps.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidParameter("hessian steps must be positive, one per coordinate".into()));
    }
    let eval = |p: &[f64]| -> Result<f64> {
        let v = f(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("objective at {p:?}")))
        }
    };
    let f0 = eval(x)?;
    let mut h = SquareMatrix::zeros(d);
    let mut p = x.to_vec();
    for i in 0..d {
        p[i] = x[i] + steps[i];
        let fp = eval(&p)?;
        p[i] = x[i] - steps[i];
        let fm = eval(&p)?;
        p[i] = x[i];
        h.set(i, i, (fp - 2.0 * f0 + fm) / (steps[i] * steps[i]));
    }
    for i in 0..d {
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                p[i] = x[i] + si * steps[i];
                p[j] = x[j] + sj * steps[j];
                let v = eval(&p);
                p[i] = x[i];
                p[j] = x[j];
                v
            };
            let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                / (4.0 * steps[i] * steps[j]);
            h.set(i, j, v);
            h.set(j, i, v);
        }
    }
    // (H + Hᵀ)/2 holds by construction: each off-diagonal pair comes from one stencil.
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diagonal_quadratic() {
        let f = |x: &[f64]| 0.5 * (2.0 * x[0] * x[0] + 3.0 * x[1] * x[1]);
        for x in [[0.0, 0.0], [1.5, -2.0], [100.0, 7.0]] {
            let h = numeric_hessian(f, &x, &default_steps(&x)).unwrap();
            assert!(h.max_abs_diff(&SquareMatrix::diagonal(&[2.0, 3.0])) < 1e-6, "{h:?}");
        }
    }

    #[test]
    fn bilinear() {
        let h = numeric_hessian(|x: &[f64]| x[0] * x[1], &[1.0, 1.0], &[1e-4, 1e-4]).unwrap();
        let expected = SquareMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert!(h.max_abs_diff(&expected) < 1e-8);
    }

    #[test]
    fn non_finite_objective() {
        let r = numeric_hessian(|x: &[f64]| x[0].ln(), &[0.0], &[1e-6]);
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    proptest! {
        #[test]
        fn random_quadratic(a in proptest::collection::vec(-5.0f64..5.0, 9), x in proptest::collection::vec(-2.0f64..2.0, 3)) {
            // f = ½ xᵀ A x with A symmetrized.
            let m = |i: usize, j: usize| 0.5 * (a[3 * i + j] + a[3 * j + i]);
            let f = |p: &[f64]| {
                let mut s = 0.0;
                for i in 0..3 { for j in 0..3 { s += 0.5 * p[i] * m(i, j) * p[j]; } }
                s
            };
            let h = numeric_hessian(f, &x, &[1e-3; 3]).unwrap();
            for i in 0..3 { for j in 0..3 {
                prop_assert!((h.get(i, j) - m(i, j)).abs() < 1e-5);
            }}
        }
    }
}
