//! Monte Carlo replication: simulate, fit, and summarize bias, spread,
//! coverage and test rejection rates over many independent samples.

pub(crate) mod output;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{fit, fit_s_only, lrt_equal_drift, Sample};
use crate::model::{Model, Scenario};
use crate::sampler::{ExactSampler, RngStream};

pub use output::{format_table, write_summary_csv, write_sweep_csv};

/// Studies fail outright when more than this fraction of replications fail,
/// unless [`StudyConfig::with_max_failure_rate`] says otherwise.
pub const MAX_FAILURE_RATE: f64 = 0.05;

fn default_failure_rate() -> f64 {
    MAX_FAILURE_RATE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub model: Model,
    pub scenario: Scenario,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub compute_lrt: bool,
    pub compute_s_only: bool,
    #[serde(default = "default_failure_rate")]
    pub max_failure_rate: f64,
}

impl StudyConfig {
    pub fn new(model: Model, scenario: Scenario, n: usize, reps: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            model,
            scenario,
            n,
            reps,
            seed,
            compute_lrt: false,
            compute_s_only: false,
            max_failure_rate: MAX_FAILURE_RATE,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_lrt(mut self, on: bool) -> Self {
        self.compute_lrt = on;
        self
    }

    pub fn with_s_only(mut self, on: bool) -> Self {
        self.compute_s_only = on;
        self
    }

    /// Fraction of failed replications tolerated before [`run_study`] errors.
    /// Failed replications are still excluded from the summaries.
    pub fn with_max_failure_rate(mut self, rate: f64) -> Result<Self> {
        self.max_failure_rate = rate;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.max_failure_rate) {
            return Err(Error::InvalidParameter(format!(
                "failure rate must lie in [0, 1], got {}",
                self.max_failure_rate
            )));
        }
        if self.n < 5 {
            return Err(Error::InvalidParameter(format!("sample size must be at least 5, got {}", self.n)));
        }
        if self.reps < 1 {
            return Err(Error::InvalidParameter("at least one replication is required".into()));
        }
        self.scenario.contract(&self.model).map(|_| ())
    }

    /// True parameter vector in the coordinates of the fitted scenario.
    pub fn truth(&self) -> Result<Vec<f64>> {
        self.scenario.contract(&self.model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub param: String,
    pub truth: f64,
    pub avg: f64,
    /// Standard deviation of the estimates across replications.
    pub emp_se: f64,
    /// Median of the per-replication asymptotic standard errors.
    pub asym_se: f64,
    /// Percentage of 95% intervals containing the truth.
    pub cp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub scenario: Scenario,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub params: Vec<ParamSummary>,
    /// `(mu1, sigma1_sq)` fitted from the `s` values alone.
    pub s_only: Option<Vec<ParamSummary>>,
    pub lrt_rejection_percent: Option<f64>,
    pub failed_replications: usize,
}

struct Replication {
    estimate: Vec<f64>,
    se: Vec<f64>,
    s_only: Option<([f64; 2], [f64; 2])>,
    lrt_reject: Option<bool>,
}

fn replicate(cfg: &StudyConfig, sampler: &ExactSampler, index: usize) -> Result<Replication> {
    let b = cfg.model.boundary();
    let mut rng = RngStream::new(cfg.seed, index as u64);
    let sample: Sample = sampler.sample(cfg.n, &mut rng)?;
    let f = fit(&sample, cfg.scenario, b)?;
    let se = match (f.converged, f.se) {
        (true, Some(se)) => se,
        _ => return Err(Error::NotPositiveDefinite { row: 0, pivot: f64::NAN }),
    };
    let s_only = if cfg.compute_s_only {
        let s = fit_s_only(&sample, b)?;
        let se = s.se.ok_or(Error::NotPositiveDefinite { row: 0, pivot: f64::NAN })?;
        Some(([s.mu1, s.sigma1_sq], se))
    } else {
        None
    };
    let lrt_reject = if cfg.compute_lrt { Some(lrt_equal_drift(&sample, b)?.reject) } else { None };
    Ok(Replication { estimate: f.estimate, se, s_only, lrt_reject })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn summarize(name: &str, truth: f64, estimates: &[f64], ses: &[f64]) -> ParamSummary {
    let k = estimates.len() as f64;
    let avg = estimates.iter().sum::<f64>() / k;
    let emp_se = if estimates.len() > 1 {
        (estimates.iter().map(|e| (e - avg).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    let covered = estimates.iter().zip(ses).filter(|(e, s)| (*e - truth).abs() <= 1.96 * *s).count();
    ParamSummary {
        param: name.to_string(),
        truth,
        avg,
        emp_se,
        asym_se: median(ses.to_vec()),
        cp: 100.0 * covered as f64 / k,
    }
}

/// Runs `cfg.reps` independent simulate-then-fit replications in parallel.
///
/// Replication `i` draws from stream `i` of `cfg.seed`, so the summary does not
/// depend on the number of worker threads.
pub fn run_study(cfg: &StudyConfig) -> Result<StudySummary> {
    cfg.validate()?;
    let truth = cfg.truth()?;
    let sampler = ExactSampler::new(cfg.model)?;
    let results: Vec<Result<Replication>> =
        (0..cfg.reps).into_par_iter().map(|i| replicate(cfg, &sampler, i)).collect();
    let ok: Vec<Replication> = results.into_iter().filter_map(|r| r.ok()).collect();
    let failed = cfg.reps - ok.len();
    if ok.is_empty() || failed as f64 > cfg.max_failure_rate * cfg.reps as f64 {
        return Err(Error::TooManyFailures { failed, reps: cfg.reps });
    }

    let column = |pick: &dyn Fn(&Replication) -> f64| ok.iter().map(pick).collect::<Vec<f64>>();
    let params = cfg
        .scenario
        .param_names()
        .iter()
        .enumerate()
        .map(|(j, name)| summarize(name, truth[j], &column(&|r| r.estimate[j]), &column(&|r| r.se[j])))
        .collect();

    let s_only = cfg.compute_s_only.then(|| {
        let p1 = cfg.model.phase1();
        let s_truth = [p1.mu(), p1.sigma2()];
        ["mu1", "sigma1_sq"]
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let est = column(&|r| r.s_only.map_or(f64::NAN, |(e, _)| e[j]));
                let se = column(&|r| r.s_only.map_or(f64::NAN, |(_, s)| s[j]));
                summarize(name, s_truth[j], &est, &se)
            })
            .collect()
    });

    let lrt_rejection_percent = cfg
        .compute_lrt
        .then(|| 100.0 * ok.iter().filter(|r| r.lrt_reject == Some(true)).count() as f64 / ok.len() as f64);

    Ok(StudySummary {
        scenario: cfg.scenario,
        n: cfg.n,
        reps: cfg.reps,
        seed: cfg.seed,
        params,
        s_only,
        lrt_rejection_percent,
        failed_replications: failed,
    })
}

/// Model parameter varied by [`run_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Mu1,
    Mu2,
    /// Phase-2 squared diffusion; the shared one in the equal-variance and no-effect scenarios.
    Sigma2,
    K,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Mu1 => "mu1",
            SweepAxis::Mu2 => "mu2",
            SweepAxis::Sigma2 => "sigma2",
            SweepAxis::K => "k",
        }
    }

    fn index(&self, scenario: Scenario) -> Result<usize> {
        use Scenario::*;
        let idx = match (self, scenario) {
            (SweepAxis::Mu1, _) => Some(0),
            (SweepAxis::Mu2, Unconstrained) => Some(2),
            (SweepAxis::Mu2, EqualVariance | ProportionalVariance) => Some(1),
            (SweepAxis::Sigma2, Unconstrained) => Some(3),
            (SweepAxis::Sigma2, EqualVariance) => Some(2),
            (SweepAxis::Sigma2, NoEffect) => Some(1),
            (SweepAxis::K, ProportionalVariance) => Some(2),
            _ => None,
        };
        idx.ok_or_else(|| Error::InvalidParameter(format!("cannot sweep {} under {scenario:?}", self.name())))
    }

    /// `base` with this parameter set to `value`, other scenario parameters held fixed.
    pub fn apply(&self, base: &StudyConfig, value: f64) -> Result<StudyConfig> {
        let mut params = base.truth()?;
        params[self.index(base.scenario)?] = value;
        let model = base.scenario.expand(&params, base.model.boundary())?;
        Ok(StudyConfig { model, ..base.clone() })
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu1" => Ok(SweepAxis::Mu1),
            "mu2" => Ok(SweepAxis::Mu2),
            "sigma2" => Ok(SweepAxis::Sigma2),
            "k" => Ok(SweepAxis::K),
            _ => Err(Error::InvalidParameter(format!("unknown sweep axis {s:?}; expected mu1, mu2, sigma2 or k"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub axis: SweepAxis,
    pub value: f64,
    pub summary: StudySummary,
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Default grid: 20 log-spaced points on [0.1, 10].
pub fn default_sweep_grid() -> Vec<f64> {
    log_grid(0.1, 10.0, 20)
}

/// One study per value of `axis`.
pub fn run_sweep(base: &StudyConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>> {
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter(format!("sweep values must be positive, got {v}")));
    }
    values
        .iter()
        .map(|&value| {
            let cfg = axis.apply(base, value)?;
            Ok(SweepPoint { axis, value, summary: run_study(&cfg)? })
        })
        .collect()
}
