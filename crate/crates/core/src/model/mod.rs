//! Perturbed Wiener model: parameters, closed-form densities and moments.
//!
//! A Wiener process starts at 0 at time `-S` with drift `mu1` and squared
//! diffusion `sigma1_sq`. At time 0 (the intervention) its parameters switch to
//! `(mu2, sigma2_sq)`, and `R` is the time from then until it first reaches the
//! boundary `B`. The inspection time is independent of the process start, so
//! `S` is the backward recurrence time of the phase-1 first-passage time `T`.

mod density;
mod moments;
mod proportional;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::{
    cdf_s, cdf_x0_absorbed, ig_pdf, ln_cdf_x0_absorbed, ln_pdf_joint_sr, ln_pdf_s, ln_r_given_x, ln_survival_t,
    moments_s, moments_x0, pdf_joint_sr, pdf_r, pdf_s, pdf_x0, pdf_x0_absorbed, s_upper_cutoff, survival_t, Moments,
};
pub use moments::{joint_moments, JointMoments};
pub use proportional::{
    ln_pdf_joint_sr_proportional, pdf_joint_sr_proportional, special_case_summaries, ProportionalSummary,
};

/// Drift and squared diffusion coefficient of one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienerPhase {
    mu: f64,
    sigma2: f64,
}

impl WienerPhase {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("drift must be positive, got {mu}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!("squared diffusion must be positive, got {sigma2}")));
        }
        Ok(Self { mu, sigma2 })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Mean of the first-passage time through `b`.
    pub fn fpt_mean(&self, b: f64) -> f64 {
        b / self.mu
    }

    /// Shape of the inverse Gaussian first-passage law through `b`.
    pub fn fpt_shape(&self, b: f64) -> f64 {
        b * b / self.sigma2
    }

    pub fn fpt_variance(&self, b: f64) -> f64 {
        b * self.sigma2 / self.mu.powi(3)
    }
}

/// Boundary and both regimes. The process starts at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model {
    boundary: f64,
    phase1: WienerPhase,
    phase2: WienerPhase,
}

impl Model {
    pub fn new(boundary: f64, phase1: WienerPhase, phase2: WienerPhase) -> Result<Self> {
        if !(boundary > 0.0 && boundary.is_finite()) {
            return Err(Error::InvalidParameter(format!("boundary must be positive, got {boundary}")));
        }
        Ok(Self { boundary, phase1, phase2 })
    }

    pub fn from_params(boundary: f64, mu1: f64, sigma1_sq: f64, mu2: f64, sigma2_sq: f64) -> Result<Self> {
        Self::new(boundary, WienerPhase::new(mu1, sigma1_sq)?, WienerPhase::new(mu2, sigma2_sq)?)
    }

    /// `sigma_i^2 = k mu_i`.
    pub fn proportional(boundary: f64, mu1: f64, mu2: f64, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("proportionality constant must be positive, got {k}")));
        }
        Self::from_params(boundary, mu1, k * mu1, mu2, k * mu2)
    }

    /// Both phases equal: the intervention has no effect.
    pub fn no_effect(boundary: f64, mu: f64, sigma_sq: f64) -> Result<Self> {
        Self::from_params(boundary, mu, sigma_sq, mu, sigma_sq)
    }

    pub fn boundary(&self) -> f64 {
        self.boundary
    }

    pub fn phase1(&self) -> &WienerPhase {
        &self.phase1
    }

    pub fn phase2(&self) -> &WienerPhase {
        &self.phase2
    }

    /// `k` when `sigma_i^2 / mu_i` agree for both phases (relative 1e-12).
    pub fn proportionality(&self) -> Option<f64> {
        let k1 = self.phase1.sigma2 / self.phase1.mu;
        let k2 = self.phase2.sigma2 / self.phase2.mu;
        ((k1 - k2).abs() <= 1e-12 * k1.max(k2)).then_some(k1)
    }

    pub fn with_phase1(&self, phase1: WienerPhase) -> Self {
        Self { phase1, ..*self }
    }

    pub fn with_phase2(&self, phase2: WienerPhase) -> Self {
        Self { phase2, ..*self }
    }

    pub fn pdf_s(&self, s: f64) -> f64 {
        pdf_s(s, &self.phase1, self.boundary)
    }

    pub fn pdf_r(&self, r: f64) -> f64 {
        pdf_r(r, self)
    }

    pub fn pdf_joint(&self, s: f64, r: f64) -> f64 {
        pdf_joint_sr(s, r, self)
    }

    pub fn ln_pdf_joint(&self, s: f64, r: f64) -> f64 {
        ln_pdf_joint_sr(s, r, self)
    }
}

/// One measured pair: time since start `s`, time from intervention to event `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationPair {
    pub s: f64,
    pub r: f64,
}

impl ObservationPair {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("observation ({s}, {r}) must be strictly positive")));
        }
        Ok(Self { s, r })
    }
}

/// Which parameter constraint is in force during estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// `(mu1, sigma1_sq, mu2, sigma2_sq)`
    Unconstrained,
    /// `(mu1, mu2, sigma_sq)` with `sigma1_sq = sigma2_sq`
    EqualVariance,
    /// `(mu1, mu2, k)` with `sigma_i^2 = k mu_i`
    ProportionalVariance,
    /// `(mu, sigma_sq)`: both phases equal; the null model of the drift test.
    NoEffect,
}

impl Scenario {
    pub fn dim(&self) -> usize {
        self.param_names().len()
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Scenario::Unconstrained => &["mu1", "sigma1_sq", "mu2", "sigma2_sq"],
            Scenario::EqualVariance => &["mu1", "mu2", "sigma_sq"],
            Scenario::ProportionalVariance => &["mu1", "mu2", "k"],
            Scenario::NoEffect => &["mu", "sigma_sq"],
        }
    }

    /// Builds the model a parameter vector stands for.
    pub fn expand(&self, params: &[f64], boundary: f64) -> Result<Model> {
        if params.len() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "{:?} takes {} parameters, got {}",
                self,
                self.dim(),
                params.len()
            )));
        }
        match *self {
            Scenario::Unconstrained => Model::from_params(boundary, params[0], params[1], params[2], params[3]),
            Scenario::EqualVariance => Model::from_params(boundary, params[0], params[2], params[1], params[2]),
            Scenario::ProportionalVariance => Model::proportional(boundary, params[0], params[1], params[2]),
            Scenario::NoEffect => Model::no_effect(boundary, params[0], params[1]),
        }
    }

    /// Parameter vector of `model` under this constraint, if the model satisfies it.
    pub fn contract(&self, model: &Model) -> Result<Vec<f64>> {
        let (p1, p2) = (model.phase1(), model.phase2());
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        match self {
            Scenario::Unconstrained => Ok(vec![p1.mu, p1.sigma2, p2.mu, p2.sigma2]),
            Scenario::EqualVariance if close(p1.sigma2, p2.sigma2) => Ok(vec![p1.mu, p2.mu, p1.sigma2]),
            Scenario::ProportionalVariance => match model.proportionality() {
                Some(k) => Ok(vec![p1.mu, p2.mu, k]),
                None => Err(Error::InvalidParameter("model variances are not proportional to the drifts".into())),
            },
            Scenario::NoEffect if p1 == p2 => Ok(vec![p1.mu, p1.sigma2]),
            _ => Err(Error::InvalidParameter(format!("model does not satisfy the {self:?} constraint"))),
        }
    }
}
