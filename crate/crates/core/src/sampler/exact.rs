use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::inference::Sample;
use crate::model::{ln_cdf_x0_absorbed, ln_survival_t, pdf_s, s_upper_cutoff, Model, ObservationPair, WienerPhase};
use crate::numerics::{find_root, integrate_with, ROOT_TOL};

const S_GRID_CELLS: usize = 256;
const S_CDF_REL_TOL: f64 = 1e-10;

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// One draw from the inverse Gaussian law with the given mean and shape.
///
/// Transformation with rejection: a chi-square(1) variate is mapped to the
/// smaller root of the IG quadratic, then either it or `mean^2 / root` is
/// returned with the matching probability.
pub fn sample_ig<R: Rng + ?Sized>(mean: f64, shape: f64, rng: &mut R) -> f64 {
    let v: f64 = rng.sample(StandardNormal);
    let w = mean * v * v;
    // mean + mean/(2 shape) * (w - sqrt(w^2 + 4 shape w)), rearranged to avoid cancellation
    let root = mean - 2.0 * mean * w / (w + (w * w + 4.0 * shape * w).sqrt());
    let u: f64 = rng.random();
    if u * (mean + root) <= mean {
        root
    } else {
        mean * mean / root
    }
}

/// Tabulated distribution function of the backward recurrence time `S`.
///
/// `F_S` is accumulated by quadrature over a uniform grid once; each draw
/// then inverts it inside a single grid cell.
#[derive(Debug, Clone)]
pub struct BackwardRecurrence {
    phase: WienerPhase,
    boundary: f64,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
}

impl BackwardRecurrence {
    pub fn new(phase: WienerPhase, boundary: f64) -> Result<Self> {
        let s_max = s_upper_cutoff(&phase, boundary, 1e-15)?;
        let width = s_max / S_GRID_CELLS as f64;
        let nodes: Vec<f64> = (0..=S_GRID_CELLS).map(|i| i as f64 * width).collect();
        let mut cdf = Vec::with_capacity(nodes.len());
        cdf.push(0.0);
        let f = |s: f64| pdf_s(s, &phase, boundary);
        for w in nodes.windows(2) {
            let piece = integrate_with(&f, w[0], w[1], S_CDF_REL_TOL, 0.0)?.value;
            cdf.push(cdf.last().unwrap() + piece);
        }
        Ok(Self { phase, boundary, nodes, cdf })
    }

    /// `P(S <= s)`.
    pub fn cdf(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        let last = *self.nodes.last().unwrap();
        let i = self.cell_of_abscissa(s.min(last));
        let f = |u: f64| pdf_s(u, &self.phase, self.boundary);
        Ok(self.cdf[i] + integrate_with(&f, self.nodes[i], s, S_CDF_REL_TOL, 0.0)?.value)
    }

    /// Solves `F_S(s) = u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        let total = *self.cdf.last().unwrap();
        if u >= total {
            return Ok(*self.nodes.last().unwrap());
        }
        let i = self.cdf.partition_point(|c| *c <= u) - 1;
        let (lo, hi) = (self.nodes[i], self.nodes[i + 1]);
        let base = self.cdf[i] - u;
        let f = |v: f64| pdf_s(v, &self.phase, self.boundary);
        let g = |s: f64| base + integrate_with(&f, lo, s, S_CDF_REL_TOL, 0.0).map(|e| e.value).unwrap_or(f64::NAN);
        find_root(g, lo, hi, ROOT_TOL)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        self.quantile(open_unit(rng))
    }

    fn cell_of_abscissa(&self, s: f64) -> usize {
        (self.nodes.partition_point(|n| *n <= s) - 1).min(S_GRID_CELLS - 1)
    }
}

/// Draws `X(0)` given `S = s` by inverting `P(X(0) <= x, T > s) / P(T > s)`.
pub fn sample_x0_given_s<R: Rng + ?Sized>(s: f64, phase: &WienerPhase, b: f64, rng: &mut R) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("elapsed time must be positive, got {s}")));
    }
    let target = open_unit(rng).ln() + ln_survival_t(s, phase, b);
    let g = |x: f64| ln_cdf_x0_absorbed(x, s, phase, b) - target;
    let mean = phase.mu() * s;
    let sd = (phase.sigma2() * s).sqrt();
    let mut lo = (mean - 10.0 * sd).min(0.0);
    let mut reach = 10.0 * sd;
    while g(lo) > 0.0 {
        reach *= 2.0;
        lo = mean - reach;
    }
    find_root(g, lo, b, ROOT_TOL)
}

/// A simulated pair together with the latent position at the intervention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatentDraw {
    pub s: f64,
    pub x0: f64,
    pub r: f64,
}

/// Exact simulation of `(S, X(0), R)`: inverse transform for `S`, then for
/// `X(0) | S`, then an inverse Gaussian first passage from `X(0)` under the
/// post-intervention parameters.
#[derive(Debug, Clone)]
pub struct ExactSampler {
    model: Model,
    s_law: BackwardRecurrence,
}

impl ExactSampler {
    pub fn new(model: Model) -> Result<Self> {
        let s_law = BackwardRecurrence::new(*model.phase1(), model.boundary())?;
        Ok(Self { model, s_law })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn backward_recurrence(&self) -> &BackwardRecurrence {
        &self.s_law
    }

    pub fn sample_s<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        self.s_law.sample(rng)
    }

    pub fn sample_x0_given_s<R: Rng + ?Sized>(&self, s: f64, rng: &mut R) -> Result<f64> {
        sample_x0_given_s(s, self.model.phase1(), self.model.boundary(), rng)
    }

    pub fn sample_latent<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LatentDraw> {
        let b = self.model.boundary();
        let s = self.sample_s(rng)?;
        let x0 = self.sample_x0_given_s(s, rng)?;
        let dist = b - x0;
        let p2 = self.model.phase2();
        let r = sample_ig(dist / p2.mu(), dist * dist / p2.sigma2(), rng);
        Ok(LatentDraw { s, x0, r })
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ObservationPair> {
        let d = self.sample_latent(rng)?;
        ObservationPair::new(d.s, d.r)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        let pairs = (0..n).map(|_| self.sample_pair(rng)).collect::<Result<Vec<_>>>()?;
        Sample::new(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cdf_s;
    use crate::sampler::RngStream;

    fn default_phase() -> WienerPhase {
        WienerPhase::new(1.0, 0.4).unwrap()
    }

    #[test]
    fn ig_moments() {
        let mut rng = RngStream::new(11, 0);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_ig(10.0, 250.0, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        // IG(10, 250) has variance mean^3 / shape = 4
        let m4 = draws.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        let se_mean = (var / n as f64).sqrt();
        let se_var = ((m4 - var * var) / n as f64).sqrt();
        assert!((mean - 10.0).abs() < 3.0 * se_mean, "{mean}");
        assert!((var - 4.0).abs() < 3.0 * se_var, "{var}");
    }

    #[test]
    fn ig_degenerate_shape() {
        let mut rng = RngStream::new(3, 0);
        let draws: Vec<f64> = (0..10_000).map(|_| sample_ig(10.0, 1e8, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64).sqrt();
        assert!(sd / mean < 0.01);
        assert!(draws.iter().all(|x| *x > 0.0));
    }

    #[test]
    fn table_agrees_with_direct_quadrature() {
        let p = default_phase();
        let law = BackwardRecurrence::new(p, 10.0).unwrap();
        for &s in &[0.01, 1.0, 5.2, 9.99, 14.0, 25.0] {
            let direct = cdf_s(s, &p, 10.0).unwrap();
            assert!((law.cdf(s).unwrap() - direct).abs() < 1e-10, "s={s}");
        }
        let last = *law.cdf.last().unwrap();
        assert!((last - 1.0).abs() < 1e-9, "{last}");
    }

    #[test]
    fn quantile_inverts_cdf() {
        let law = BackwardRecurrence::new(default_phase(), 10.0).unwrap();
        for &u in &[1e-9, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
            let s = law.quantile(u).unwrap();
            assert!((law.cdf(s).unwrap() - u).abs() < 1e-11, "u={u}");
        }
    }

    #[test]
    fn x0_draws_below_boundary_and_concentrate_early() {
        let p = default_phase();
        let mut rng = RngStream::new(5, 0);
        let draws: Vec<f64> = (0..2000).map(|_| sample_x0_given_s(1e-4, &p, 10.0, &mut rng).unwrap()).collect();
        assert!(draws.iter().all(|x| *x < 10.0));
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let sd = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / draws.len() as f64).sqrt();
        assert!(sd < 0.05, "{sd}");
        for _ in 0..2000 {
            assert!(sample_x0_given_s(30.0, &p, 10.0, &mut rng).unwrap() < 10.0);
        }
    }

    #[test]
    fn pairs_are_positive() {
        let m = Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026).unwrap();
        let sampler = ExactSampler::new(m).unwrap();
        let mut rng = RngStream::new(1, 1);
        for _ in 0..5000 {
            let d = sampler.sample_latent(&mut rng).unwrap();
            assert!(d.s > 0.0 && d.r > 0.0 && d.x0 < 10.0);
        }
    }
}
