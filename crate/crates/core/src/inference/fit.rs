use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::simplex::{nelder_mead, SimplexOptions};
use crate::inference::{check_params, loglik, loglik_s, Sample};
use crate::model::{Model, Scenario};
use crate::numerics::{default_steps, numeric_hessian, spd_inverse, SquareMatrix};

/// Restarts stop once the optimum moves the objective by less than this.
const RESTART_TOL: f64 = 1e-6;
const MAX_RESTARTS: usize = 10;
const Z_95: f64 = 1.96;
/// An `s`-only variance below this fraction of its moment start counts as collapsed.
const COLLAPSE_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub scenario: Scenario,
    pub boundary: f64,
    pub start: Vec<f64>,
    pub estimate: Vec<f64>,
    pub loglik: f64,
    /// Hessian of the total negative log-likelihood at the estimate.
    pub observed_info: Option<SquareMatrix>,
    pub se: Option<Vec<f64>>,
    pub ci95: Option<Vec<(f64, f64)>>,
    pub converged: bool,
    pub restarts_used: usize,
}

impl FitResult {
    pub fn param_names(&self) -> &'static [&'static str] {
        self.scenario.param_names()
    }

    pub fn model(&self) -> Result<Model> {
        self.scenario.expand(&self.estimate, self.boundary)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamInterval {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub low: f64,
    pub high: f64,
}

/// Maximum-likelihood fit from the `s` values only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SOnlyFit {
    pub mu1: f64,
    pub sigma1_sq: f64,
    pub loglik: f64,
    pub se: Option<[f64; 2]>,
    pub converged: bool,
}

struct Optimum {
    x: Vec<f64>,
    loglik: f64,
    restarts: usize,
}

/// Maximizes `objective` over positive vectors by simplex search on the log scale,
/// relaunching from each optimum until the value settles.
fn maximize<F: Fn(&[f64]) -> Result<f64>>(objective: F, start: &[f64]) -> Result<Optimum> {
    let neg = |theta: &[f64]| {
        let p: Vec<f64> = theta.iter().map(|t| t.exp()).collect();
        objective(&p).map(|l| -l).unwrap_or(f64::INFINITY)
    };
    let mut theta: Vec<f64> = start.iter().map(|p| p.ln()).collect();
    let mut value = neg(&theta);
    if !value.is_finite() {
        return Err(Error::InfeasibleStart(format!("log-likelihood is not finite at {start:?}")));
    }
    let opts = SimplexOptions::default();
    for restart in 0..=MAX_RESTARTS {
        let run = nelder_mead(neg, &theta, &opts);
        let change = (value - run.value).abs();
        theta = run.x;
        value = run.value;
        if change < RESTART_TOL {
            return Ok(Optimum { x: theta.iter().map(|t| t.exp()).collect(), loglik: -value, restarts: restart });
        }
    }
    Err(Error::OptimFailure { restarts: MAX_RESTARTS })
}

/// Standard errors from the inverse of an observed information matrix.
fn standard_errors(info: &SquareMatrix) -> Result<Vec<f64>> {
    Ok(spd_inverse(info)?.diag().iter().map(|v| v.sqrt()).collect())
}

fn mean_var<I: Iterator<Item = f64>>(values: I) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Drift and squared diffusion matching the mean and variance of `S`.
fn moment_start_s(mean: f64, var: f64, b: f64) -> (f64, f64) {
    let denom = 3.0 * mean - (3.0 * var).sqrt();
    let mu = if denom > 0.0 { b / denom } else { b / (2.0 * mean) };
    let sigma2 = 2.0 * mu * mu * mean - b * mu;
    let sigma2 = if sigma2 > 0.0 { sigma2 } else { 0.04 * b * mu };
    (mu, sigma2)
}

fn require_spread(sample: &Sample) -> Result<((f64, f64), (f64, f64))> {
    if sample.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 pairs, got {}", sample.len())));
    }
    let s = mean_var(sample.s_values());
    let r = mean_var(sample.r_values());
    if !(s.1 > 0.0) {
        return Err(Error::DegenerateSample("the s values have zero variance".into()));
    }
    if !(r.1 > 0.0) {
        return Err(Error::DegenerateSample("the r values have zero variance".into()));
    }
    Ok((s, r))
}

fn s_only_optimum(sample: &Sample, b: f64, s_moments: (f64, f64)) -> Result<Optimum> {
    let (mu0, sigma0) = moment_start_s(s_moments.0, s_moments.1, b);
    maximize(|p| loglik_s(sample, p[0], p[1], b), &[mu0, sigma0])
}

/// Starting point for [`fit`]: phase-1 parameters from the `s` values alone,
/// phase-2 parameters by matching the mean and variance of `r` given the
/// estimated mean position at the intervention.
pub fn starting_values(sample: &Sample, scenario: Scenario, b: f64) -> Result<Vec<f64>> {
    let ((mean_s, var_s), (mean_r, var_r)) = require_spread(sample)?;

    if scenario == Scenario::ProportionalVariance {
        let (mu0, _) = moment_start_s(mean_s, var_s, b);
        let k = 2.0 * mu0 * mean_s - b;
        let k0 = if k > 0.0 { k } else { 0.04 * b };
        let opt = maximize(|p| loglik_s(sample, p[0], p[1] * p[0], b), &[mu0, k0])?;
        let (mu1, k) = if opt.x[1] > COLLAPSE_RATIO * k0 { (opt.x[0], opt.x[1]) } else { (mu0, k0) };
        return Ok(vec![mu1, (b + k) / (2.0 * mean_r), k]);
    }

    // Nearly uniform s values drive the s-only variance to zero, a corner the
    // joint search cannot leave; the moment start is used instead.
    let moment = moment_start_s(mean_s, var_s, b);
    let opt = s_only_optimum(sample, b, (mean_s, var_s))?;
    let (mu1, sigma1_sq) = if opt.x[1] > COLLAPSE_RATIO * moment.1 { (opt.x[0], opt.x[1]) } else { moment };
    let x_hat = (b * mu1 - sigma1_sq) / (2.0 * mu1);
    let x_hat = if x_hat < b { x_hat } else { b / 2.0 };
    let mu2 = (b - x_hat) / mean_r;
    let sigma2_sq = var_r * mu2.powi(3) / (b - x_hat);

    Ok(match scenario {
        Scenario::Unconstrained => vec![mu1, sigma1_sq, mu2, sigma2_sq],
        // var(R) also carries the spread of X(0), so the s-based variance is the safer shared start
        Scenario::EqualVariance => vec![mu1, mu2, sigma1_sq],
        Scenario::NoEffect => vec![(mu1 * mu2).sqrt(), sigma1_sq],
        Scenario::ProportionalVariance => unreachable!(),
    })
}

/// Maximum-likelihood fit of the `s` values alone.
pub fn fit_s_only(sample: &Sample, b: f64) -> Result<SOnlyFit> {
    let (s_moments, _) = require_spread(sample)?;
    let opt = s_only_optimum(sample, b, s_moments)?;
    let neg = |p: &[f64]| loglik_s(sample, p[0], p[1], b).map(|l| -l).unwrap_or(f64::NAN);
    let se = numeric_hessian(neg, &opt.x, &default_steps(&opt.x)).and_then(|h| standard_errors(&h)).ok();
    Ok(SOnlyFit {
        mu1: opt.x[0],
        sigma1_sq: opt.x[1],
        loglik: opt.loglik,
        converged: se.is_some(),
        se: se.map(|v| [v[0], v[1]]),
    })
}

/// Maximum-likelihood fit from a given starting point.
pub fn fit_with_start(sample: &Sample, scenario: Scenario, b: f64, start: &[f64]) -> Result<FitResult> {
    check_params(start, scenario)?;
    let d = scenario.dim();
    if sample.len() < d + 1 {
        return Err(Error::InvalidParameter(format!(
            "{scenario:?} needs at least {} pairs, got {}",
            d + 1,
            sample.len()
        )));
    }
    let opt = maximize(|p| loglik(sample, p, scenario, b), start)?;
    let neg = |p: &[f64]| loglik(sample, p, scenario, b).map(|l| -l).unwrap_or(f64::NAN);
    let observed_info = numeric_hessian(neg, &opt.x, &default_steps(&opt.x)).ok();
    let se = observed_info.as_ref().and_then(|h| standard_errors(h).ok());
    let ci95 = se.as_ref().map(|se| opt.x.iter().zip(se).map(|(e, s)| (e - Z_95 * s, e + Z_95 * s)).collect());
    Ok(FitResult {
        scenario,
        boundary: b,
        start: start.to_vec(),
        estimate: opt.x,
        loglik: opt.loglik,
        observed_info,
        converged: se.is_some(),
        se,
        ci95,
        restarts_used: opt.restarts,
    })
}

/// Maximum-likelihood fit under `scenario`, started from [`starting_values`].
pub fn fit(sample: &Sample, scenario: Scenario, b: f64) -> Result<FitResult> {
    let start = starting_values(sample, scenario, b)?;
    fit_with_start(sample, scenario, b, &start)
}

/// Asymptotic standard errors and 95% intervals from the observed information.
pub fn confidence_report(fit: &FitResult) -> Result<Vec<ParamInterval>> {
    let info =
        fit.observed_info.as_ref().ok_or_else(|| Error::NonFinite("the fit has no observed information".into()))?;
    let se = standard_errors(info)?;
    Ok(fit
        .param_names()
        .iter()
        .zip(&fit.estimate)
        .zip(se)
        .map(|((name, &estimate), se)| ParamInterval {
            name: name.to_string(),
            estimate,
            se,
            low: estimate - Z_95 * se,
            high: estimate + Z_95 * se,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{moments_s, ObservationPair, WienerPhase};
    use crate::sampler::{ExactSampler, RngStream};

    #[test]
    fn moment_start_inverts_s_moments() {
        for &(mu, s2) in &[(1.0, 0.4), (0.3, 0.05), (2.0, 3.0), (1.0, 0.026)] {
            let m = moments_s(&WienerPhase::new(mu, s2).unwrap(), 10.0);
            let (mu0, s0) = moment_start_s(m.mean, m.variance, 10.0);
            assert!((mu0 / mu - 1.0).abs() < 1e-9, "{mu} {mu0}");
            assert!((s0 / s2 - 1.0).abs() < 1e-9, "{s2} {s0}");
        }
        let (mu0, s0) = moment_start_s(5.0, 1e6, 10.0);
        assert!(mu0 > 0.0 && s0 > 0.0);
    }

    #[test]
    fn identical_pairs_are_degenerate() {
        let s = Sample::new(vec![ObservationPair::new(2.0, 3.0).unwrap(); 10]).unwrap();
        assert!(matches!(starting_values(&s, Scenario::Unconstrained, 10.0), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn diagonal_information() {
        let mut f = FitResult {
            scenario: Scenario::NoEffect,
            boundary: 10.0,
            start: vec![1.0, 1.0],
            estimate: vec![1.0, 0.5],
            loglik: -1.0,
            observed_info: Some(SquareMatrix::diagonal(&[4.0, 100.0])),
            se: None,
            ci95: None,
            converged: true,
            restarts_used: 0,
        };
        let rep = confidence_report(&f).unwrap();
        assert!((rep[0].se - 0.5).abs() < 1e-15 && (rep[1].se - 0.1).abs() < 1e-15);
        assert!((rep[1].low - (0.5 - 0.196)).abs() < 1e-12);
        f.observed_info = Some(SquareMatrix::diagonal(&[4.0, -1.0]));
        assert!(confidence_report(&f).is_err());
    }

    #[test]
    fn fit_improves_on_start_and_is_positive() {
        let m = Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026).unwrap();
        let sampler = ExactSampler::new(m).unwrap();
        let sample = sampler.sample(100, &mut RngStream::new(42, 0)).unwrap();
        let f = fit(&sample, Scenario::Unconstrained, 10.0).unwrap();
        assert!(f.converged);
        assert!(f.estimate.iter().all(|p| *p > 0.0));
        assert!(f.loglik >= loglik(&sample, &f.start, Scenario::Unconstrained, 10.0).unwrap());
        let se = f.se.as_ref().unwrap();
        let truth = [1.0, 0.4, 0.1, 0.026];
        for i in 0..4 {
            assert!((f.estimate[i] - truth[i]).abs() < 4.0 * se[i], "{i}: {:?} {:?}", f.estimate, se);
            let (lo, hi) = f.ci95.as_ref().unwrap()[i];
            assert!((hi - lo - 2.0 * Z_95 * se[i]).abs() < 1e-12);
        }
    }
}
