//! Moments of `R` and the `(S, R)` dependence by quadrature.
//!
//! Outside the proportional case these have no closed form; they are computed
//! from the joint density directly.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{moments_s, moments_x0, pdf_joint_sr, pdf_r, s_upper_cutoff, Model};
use crate::numerics::{integrate, tail_cutoff, TAIL_DROP};

/// Relative tolerance of the numerical summaries.
pub const SUMMARY_REL_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointMoments {
    pub mean_s: f64,
    pub var_s: f64,
    pub cv_s: f64,
    pub mean_r: f64,
    pub var_r: f64,
    pub cv_r: f64,
    pub cov_sr: f64,
    pub corr_sr: f64,
}

/// Point beyond which the density of `R` is negligible.
pub(crate) fn r_upper_cutoff(model: &Model) -> Result<f64> {
    // E[R] = (B - E[X(0)]) / mu2 sets the scan scale.
    let scale = (model.boundary() - moments_x0(model.phase1(), model.boundary()).mean) / model.phase2().mu();
    tail_cutoff(|r| pdf_r(r, model).ln(), 0.0, scale, TAIL_DROP * 1e-2)
}

pub(crate) fn s_cutoff(model: &Model) -> Result<f64> {
    s_upper_cutoff(model.phase1(), model.boundary(), TAIL_DROP * 1e-2)
}

/// Means, variances, covariance and correlation of `(S, R)`.
///
/// `S` moments are closed form; the rest come from nested quadrature of the
/// joint density at relative tolerance [`SUMMARY_REL_TOL`].
pub fn joint_moments(model: &Model) -> Result<JointMoments> {
    let tol = SUMMARY_REL_TOL * 1e-3;
    let s_mom = moments_s(model.phase1(), model.boundary());
    let r_hi = r_upper_cutoff(model)?;
    let s_hi = s_cutoff(model)?;

    let mean_r = integrate(|r| r * pdf_r(r, model), 0.0, r_hi, tol)?;
    let second_r = integrate(|r| r * r * pdf_r(r, model), 0.0, r_hi, tol)?;
    let var_r = second_r - mean_r * mean_r;

    let inner = |s: f64| integrate(|r| r * pdf_joint_sr(s, r, model), 0.0, r_hi, tol).unwrap_or(f64::NAN);
    let cross = integrate(|s| s * inner(s), 0.0, s_hi, tol)?;
    let cov_sr = cross - s_mom.mean * mean_r;

    Ok(JointMoments {
        mean_s: s_mom.mean,
        var_s: s_mom.variance,
        cv_s: s_mom.cv,
        mean_r,
        var_r,
        cv_r: var_r.sqrt() / mean_r,
        cov_sr,
        corr_sr: cov_sr / (s_mom.variance * var_r).sqrt(),
    })
}
