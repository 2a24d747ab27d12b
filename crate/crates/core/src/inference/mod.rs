//! Likelihoods, maximum-likelihood fits with asymptotic intervals, and the
//! likelihood-ratio test of equal drifts.

mod fit;
mod lrt;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ln_pdf_joint_sr, ln_pdf_joint_sr_proportional, ln_pdf_s, ObservationPair, Scenario, WienerPhase};

pub use fit::{
    confidence_report, fit, fit_s_only, fit_with_start, starting_values, FitResult, ParamInterval, SOnlyFit,
};
pub use lrt::{lrt_equal_drift, LrtResult, LRT_THRESHOLD};
pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};

/// A non-empty collection of observed pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pairs: Vec<ObservationPair>,
}

impl Sample {
    pub fn new(pairs: Vec<ObservationPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("a sample needs at least one pair".into()));
        }
        if let Some(p) = pairs.iter().find(|p| !(p.s > 0.0 && p.r > 0.0 && p.s.is_finite() && p.r.is_finite())) {
            return Err(Error::InvalidParameter(format!("observation ({}, {}) must be strictly positive", p.s, p.r)));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[ObservationPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn s_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|p| p.s)
    }

    pub fn r_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.pairs.iter().map(|p| p.r)
    }

    /// Samples joined end to end.
    pub fn concat(&self, other: &Sample) -> Sample {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Sample { pairs }
    }
}

fn check_params(params: &[f64], scenario: Scenario) -> Result<()> {
    if params.len() != scenario.dim() {
        return Err(Error::InvalidParameter(format!(
            "{scenario:?} takes {} parameters, got {}",
            scenario.dim(),
            params.len()
        )));
    }
    if params.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
        return Err(Error::InvalidParameter(format!("parameters must be positive, got {params:?}")));
    }
    Ok(())
}

fn finite_sum<I: Iterator<Item = f64>>(terms: I, what: &str) -> Result<f64> {
    let mut total = 0.0;
    for (i, t) in terms.enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("{what} of pair {i} is {t}")));
        }
        total += t;
    }
    Ok(total)
}

/// Joint log-likelihood of `(s, r)` pairs under `scenario`.
pub fn loglik(sample: &Sample, params: &[f64], scenario: Scenario, boundary: f64) -> Result<f64> {
    check_params(params, scenario)?;
    if scenario == Scenario::ProportionalVariance {
        let (mu1, mu2, k) = (params[0], params[1], params[2]);
        let terms = sample.pairs.iter().map(|p| ln_pdf_joint_sr_proportional(p.s, p.r, mu1, mu2, k, boundary));
        return finite_sum(terms, "log density");
    }
    let model = scenario.expand(params, boundary)?;
    finite_sum(sample.pairs.iter().map(|p| ln_pdf_joint_sr(p.s, p.r, &model)), "log density")
}

/// Log-likelihood of the `s` values alone.
pub fn loglik_s(sample: &Sample, mu1: f64, sigma1_sq: f64, boundary: f64) -> Result<f64> {
    let phase = WienerPhase::new(mu1, sigma1_sq)?;
    finite_sum(sample.s_values().map(|s| ln_pdf_s(s, &phase, boundary)), "log density of s")
}
