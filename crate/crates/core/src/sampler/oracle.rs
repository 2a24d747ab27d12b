//! Discretized-path oracle for the inspection scheme.
//!
//! Consecutive phase-1 renewal cycles are simulated by Euler–Maruyama, an
//! inspection time is drawn uniformly over the simulated span, and the path
//! is continued from its state at inspection under phase-2 parameters. No
//! closed-form density is used, so the oracle can check all of them.
//!
//! Crossings are detected at the first grid point at or above the boundary,
//! without a Brownian-bridge correction. First-passage times are therefore
//! biased upwards by roughly `0.58 sigma sqrt(dt) / mu`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, ObservationPair, WienerPhase};
use crate::sampler::exact::open_unit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    dt: f64,
    horizon: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { dt: 1e-3, horizon: 64 }
    }
}

impl OracleConfig {
    pub fn new(dt: f64, horizon: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        if horizon < 10 {
            return Err(Error::InvalidParameter(format!("horizon must be at least 10 cycles, got {horizon}")));
        }
        Ok(Self { dt, horizon })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

fn steps_to_boundary<R: Rng + ?Sized>(start: f64, phase: &WienerPhase, b: f64, dt: f64, rng: &mut R) -> u64 {
    let drift = phase.mu() * dt;
    let vol = (phase.sigma2() * dt).sqrt();
    let mut x = start;
    let mut n = 0u64;
    while x < b {
        let z: f64 = rng.sample(StandardNormal);
        x += drift + vol * z;
        n += 1;
    }
    n
}

fn position_after<R: Rng + ?Sized>(steps: u64, phase: &WienerPhase, dt: f64, rng: &mut R) -> f64 {
    let drift = phase.mu() * dt;
    let vol = (phase.sigma2() * dt).sqrt();
    let mut x = 0.0;
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        x += drift + vol * z;
    }
    x
}

/// One `(s, r)` pair from the path-simulation oracle.
pub fn oracle_sample_pair<R: Rng + Clone>(model: &Model, cfg: &OracleConfig, rng: &mut R) -> Result<ObservationPair> {
    let b = model.boundary();
    let p1 = model.phase1();
    let dt = cfg.dt;
    if dt > 1e-2 * p1.fpt_mean(b) {
        return Err(Error::InvalidParameter(format!(
            "time step {dt} exceeds 1% of the mean cycle length {}",
            p1.fpt_mean(b)
        )));
    }

    // Each cycle's generator state is kept so the inspected cycle can be replayed.
    let mut starts = Vec::with_capacity(cfg.horizon);
    let mut lengths = Vec::with_capacity(cfg.horizon);
    for _ in 0..cfg.horizon {
        starts.push(rng.clone());
        lengths.push(steps_to_boundary(0.0, p1, b, dt, rng));
    }
    let total_steps: u64 = lengths.iter().sum();
    let inspection = open_unit(rng) * total_steps as f64 * dt;

    let mut elapsed = 0.0;
    let mut cycle = None;
    for (i, &len) in lengths.iter().enumerate() {
        let span = len as f64 * dt;
        if inspection < elapsed + span {
            cycle = Some((i, inspection - elapsed));
            break;
        }
        elapsed += span;
    }
    let (index, offset) = cycle.ok_or(Error::HorizonTooShort)?;

    let grid_steps = ((offset / dt).floor() as u64).min(lengths[index] - 1);
    let mut replay = starts.swap_remove(index);
    let x_at_inspection = position_after(grid_steps, p1, dt, &mut replay);

    let r_steps = steps_to_boundary(x_at_inspection, model.phase2(), b, dt, rng);
    ObservationPair::new(offset, r_steps as f64 * dt)
}
