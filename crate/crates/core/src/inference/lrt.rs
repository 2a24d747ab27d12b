use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::fit::{fit, fit_with_start, FitResult};
use crate::inference::Sample;
use crate::model::Scenario;

/// 95% point of the chi-square law with one degree of freedom.
pub const LRT_THRESHOLD: f64 = 3.84;

/// Slack allowed when the null optimum beats the nested full optimum.
const NESTING_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtResult {
    pub statistic: f64,
    pub threshold: f64,
    pub reject: bool,
    /// `(mu, sigma_sq)` shared by both phases.
    pub null_fit: FitResult,
    /// `(mu1, mu2, sigma_sq)`.
    pub full_fit: FitResult,
}

/// Likelihood-ratio test of equal drifts before and after the intervention,
/// with a common squared diffusion coefficient under both hypotheses.
pub fn lrt_equal_drift(sample: &Sample, b: f64) -> Result<LrtResult> {
    if sample.len() < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 pairs, got {}", sample.len())));
    }
    let null_fit = fit(sample, Scenario::NoEffect, b)?;
    let mut full_fit = fit(sample, Scenario::EqualVariance, b)?;
    if null_fit.loglik > full_fit.loglik + NESTING_SLACK {
        // the null optimum is a point of the full model; climb from there
        let (mu, sigma_sq) = (null_fit.estimate[0], null_fit.estimate[1]);
        full_fit = fit_with_start(sample, Scenario::EqualVariance, b, &[mu, mu, sigma_sq])?;
    }
    let statistic = (2.0 * (full_fit.loglik - null_fit.loglik)).max(0.0);
    Ok(LrtResult { statistic, threshold: LRT_THRESHOLD, reject: statistic > LRT_THRESHOLD, null_fit, full_fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use crate::sampler::{ExactSampler, RngStream};

    #[test]
    fn large_drift_change_rejects() {
        let m = Model::from_params(10.0, 1.0, 0.1, 10.0, 0.1).unwrap();
        let sample = ExactSampler::new(m).unwrap().sample(100, &mut RngStream::new(1, 0)).unwrap();
        let t = lrt_equal_drift(&sample, 10.0).unwrap();
        assert!(t.reject, "{}", t.statistic);
        assert!(t.full_fit.loglik + 1e-8 >= t.null_fit.loglik);
    }

    #[test]
    fn statistic_nonnegative_under_null() {
        let m = Model::no_effect(10.0, 1.0, 0.4).unwrap();
        let sampler = ExactSampler::new(m).unwrap();
        for id in 0..3 {
            let sample = sampler.sample(60, &mut RngStream::new(2, id)).unwrap();
            let t = lrt_equal_drift(&sample, 10.0).unwrap();
            assert!(t.statistic >= 0.0);
            assert_eq!(t.reject, t.statistic > LRT_THRESHOLD);
        }
    }
}
