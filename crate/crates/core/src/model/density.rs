//! Closed-form densities of `S`, `X(0)`, `R` and `(S, R)`.
//!
//! Every term of the form `exp(a) Φ(-b)` is evaluated as
//! `exp(a + ln Φ(-b))`; with the default parameters `a = 2 mu1 B / sigma1^2`
//! is 50, so the naive product overflows long before the densities do.
//! Differences of such terms are formed in the log domain, and when the
//! difference cancels badly the density is recomputed by integrating the
//! conditional representation over the latent position `X(0)`.

use crate::error::Result;
use crate::model::{Model, WienerPhase};
use crate::numerics::{
    find_root, integrate, integrate_with, ln_diff_exp, log_normal_cdf, mills_ratio, signed_log_sum, SignedLog,
    LN_SQRT_2PI,
};

/// Closed-form mean, variance and coefficient of variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub cv: f64,
}

// Cancellation beyond this factor triggers the quadrature route.
const MAX_CANCELLATION: f64 = 1e5;
const FALLBACK_REL_TOL: f64 = 1e-11;

/// `ln P(T > s)` for the first-passage time of `phase` through `b`.
pub fn ln_survival_t(s: f64, phase: &WienerPhase, b: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let (mu, sigma2) = (phase.mu(), phase.sigma2());
    let sd = (sigma2 * s).sqrt();
    let upper = (b - mu * s) / sd;
    let reflected = (-b - mu * s) / sd;
    if upper < -5.0 {
        // Both terms share the factor φ(upper); what remains is a difference of
        // Mills ratios, free of the exp(2 mu b / sigma^2) blow-up.
        let diff = mills_ratio(-upper) - mills_ratio(-reflected);
        return -0.5 * upper * upper - LN_SQRT_2PI + diff.ln();
    }
    let shift = 2.0 * mu * b / sigma2;
    ln_diff_exp(log_normal_cdf(upper), shift + log_normal_cdf(reflected))
}

/// `P(T > s)`, the inverse Gaussian survival function with mean `b/mu` and shape `b^2/sigma^2`.
pub fn survival_t(s: f64, phase: &WienerPhase, b: f64) -> f64 {
    ln_survival_t(s, phase, b).exp()
}

pub fn ln_pdf_s(s: f64, phase: &WienerPhase, b: f64) -> f64 {
    if s < 0.0 {
        return f64::NEG_INFINITY;
    }
    (phase.mu() / b).ln() + ln_survival_t(s, phase, b)
}

/// Density of the backward recurrence time `S`: `P(T > s) / E[T]`.
pub fn pdf_s(s: f64, phase: &WienerPhase, b: f64) -> f64 {
    ln_pdf_s(s, phase, b).exp()
}

/// Point beyond which `P(T > s) < drop`.
pub fn s_upper_cutoff(phase: &WienerPhase, b: f64, drop: f64) -> Result<f64> {
    let target = drop.ln();
    let mut hi = 2.0 * phase.fpt_mean(b);
    while ln_survival_t(hi, phase, b) > target {
        hi *= 2.0;
    }
    find_root(|s| ln_survival_t(s, phase, b) - target, 0.0, hi, 1e-10 * hi)
}

/// `P(S <= s)` by adaptive quadrature of [`pdf_s`].
pub fn cdf_s(s: f64, phase: &WienerPhase, b: f64) -> Result<f64> {
    if s <= 0.0 {
        return Ok(0.0);
    }
    integrate(|u| pdf_s(u, phase, b), 0.0, s, 1e-10)
}

pub fn moments_s(phase: &WienerPhase, b: f64) -> Moments {
    let (mu, sigma2) = (phase.mu(), phase.sigma2());
    let mean = (b * mu + sigma2) / (2.0 * mu * mu);
    let root = (b * mu + 3.0 * sigma2) / (2.0 * mu * mu);
    let variance = root * root / 3.0;
    let cv = (b * mu + 3.0 * sigma2) / (3f64.sqrt() * (b * mu + sigma2));
    Moments { mean, variance, cv }
}

/// Sub-density of the position at time `s` of a path started at 0 that has
/// not yet reached `b`.
pub fn pdf_x0_absorbed(x: f64, s: f64, phase: &WienerPhase, b: f64) -> f64 {
    if x >= b || s <= 0.0 {
        return 0.0;
    }
    let (mu, sigma2) = (phase.mu(), phase.sigma2());
    let var = sigma2 * s;
    let free = (-(x - mu * s).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
    free * -(2.0 * b * (x - b) / var).exp_m1()
}

/// `ln P(X(0) <= x, T > s)`.
pub fn ln_cdf_x0_absorbed(x: f64, s: f64, phase: &WienerPhase, b: f64) -> f64 {
    if x >= b {
        return ln_survival_t(s, phase, b);
    }
    let (mu, sigma2) = (phase.mu(), phase.sigma2());
    let sd = (sigma2 * s).sqrt();
    let shift = 2.0 * mu * b / sigma2;
    ln_diff_exp(log_normal_cdf((x - mu * s) / sd), shift + log_normal_cdf((x - 2.0 * b - mu * s) / sd))
}

pub fn cdf_x0_absorbed(x: f64, s: f64, phase: &WienerPhase, b: f64) -> f64 {
    ln_cdf_x0_absorbed(x, s, phase, b).exp()
}

/// Unconditional density of the position at the intervention.
pub fn pdf_x0(x: f64, phase: &WienerPhase, b: f64) -> f64 {
    if x >= b {
        return 0.0;
    }
    let rate = 2.0 * phase.mu() / phase.sigma2();
    if x >= 0.0 {
        -(rate * (x - b)).exp_m1() / b
    } else {
        (rate * x).exp() * -(-rate * b).exp_m1() / b
    }
}

/// Mean, variance and CV of the position at the intervention.
pub fn moments_x0(phase: &WienerPhase, b: f64) -> Moments {
    let (mu, sigma2) = (phase.mu(), phase.sigma2());
    let mean = (b * mu - sigma2) / (2.0 * mu);
    let variance = (b * b * mu * mu + 3.0 * sigma2 * sigma2) / (12.0 * mu * mu);
    Moments { mean, variance, cv: variance.sqrt() / mean }
}

/// Inverse Gaussian density with the given mean and shape.
pub fn ig_pdf(x: f64, mean: f64, shape: f64) -> f64 {
    ln_ig_pdf(x, mean, shape).exp()
}

fn ln_ig_pdf(x: f64, mean: f64, shape: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    0.5 * (shape / (2.0 * std::f64::consts::PI * x.powi(3))).ln() - shape * (x - mean).powi(2) / (2.0 * mean * mean * x)
}

/// `ln f(r | X(0) = x)`: first passage from `x` to `b` under `phase2`.
pub fn ln_r_given_x(r: f64, x: f64, phase2: &WienerPhase, b: f64) -> f64 {
    let dist = b - x;
    if dist <= 0.0 || r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let var = phase2.sigma2() * r;
    dist.ln() - 0.5 * (2.0 * std::f64::consts::PI * var * r * r).ln() - (dist - phase2.mu() * r).powi(2) / (2.0 * var)
}

// ln(Φ(hi) - Φ(lo)) for lo < hi.
fn ln_normal_interval(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 {
        ln_diff_exp(log_normal_cdf(-lo), log_normal_cdf(-hi))
    } else {
        ln_diff_exp(log_normal_cdf(hi), log_normal_cdf(lo))
    }
}

/// Density of the time from intervention to event.
pub fn pdf_r(r: f64, model: &Model) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let b = model.boundary();
    let (p1, p2) = (model.phase1(), model.phase2());
    let (mu1, s1) = (p1.mu(), p1.sigma2());
    let (mu2, s2) = (p2.mu(), p2.sigma2());
    let sigma2 = s2.sqrt();
    let sr = r.sqrt();

    let head =
        SignedLog::new(1.0, (mu2 / b).ln() + ln_normal_interval(-mu2 * sr / sigma2, (b - mu2 * r) / (sigma2 * sr)));
    let drift_gap = 2.0 * mu1 * s2 - mu2 * s1;
    let coef = -drift_gap / (b * s1);
    let exponent = 2.0 * mu1 * r * (mu1 * s2 - mu2 * s1) / (s1 * s1);
    let lower = r * drift_gap / (s1 * sigma2 * sr);
    let upper = (b * s1 + r * drift_gap) / (s1 * sigma2 * sr);
    let shift = 2.0 * mu1 * b / s1;
    let t3 = SignedLog::scaled(coef, exponent + shift + log_normal_cdf(-upper));
    let t4 = SignedLog::scaled(-coef, exponent + log_normal_cdf(-lower));
    let sum = signed_log_sum(&[head, t3, t4]);
    if sum.total.sign > 0.0 && sum.ln_cancellation < MAX_CANCELLATION.ln() {
        return sum.total.value();
    }
    pdf_r_by_quadrature(r, model)
}

fn pdf_r_by_quadrature(r: f64, model: &Model) -> f64 {
    let b = model.boundary();
    let (p1, p2) = (model.phase1(), model.phase2());
    let rate = 2.0 * p1.mu() / p1.sigma2();
    let center = b - p2.mu() * r;
    let spread = (p2.sigma2() * r).sqrt();
    let lo = (-40.0 / rate).min(center - 12.0 * spread);
    let f = |x: f64| (ln_r_given_x(r, x, p2, b)).exp() * pdf_x0(x, p1, b);
    integrate_pieces(&f, lo, b, &[0.0, center])
}

/// `ln f(s, r)`, the joint log-density of the observed pair.
///
/// Zero arguments take their limits: `s -> 0` pins `X(0)` at 0, and `r -> 0`
/// has density 0 because the path is strictly below the boundary at time 0.
pub fn ln_pdf_joint_sr(s: f64, r: f64, model: &Model) -> f64 {
    let b = model.boundary();
    let (p1, p2) = (model.phase1(), model.phase2());
    if r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if s <= 0.0 {
        return (p1.mu() / b).ln() + ln_ig_pdf(r, p2.fpt_mean(b), p2.fpt_shape(b));
    }
    let (mu1, s1) = (p1.mu(), p1.sigma2());
    let (mu2, s2) = (p2.mu(), p2.sigma2());
    let spread = s1 * s + s2 * r;
    let gap = b - mu1 * s - mu2 * r;
    let ln_pref = (mu1 / b).ln() - LN_SQRT_2PI - 1.5 * spread.ln() - gap * gap / (2.0 * spread);

    let c1 = (b - mu1 * s) * s2 + s * mu2 * s1;
    let c2 = (-b - mu1 * s) * s2 + mu2 * s1 * s;
    let kappa = r.sqrt() / ((s1 * s2).sqrt() * (s * spread).sqrt());
    let reflected = 2.0 * r * b * (mu1 * s2 - mu2 * s1) / (s1 * spread);
    let t1 = SignedLog::scaled(c1, log_normal_cdf(c1 * kappa));
    let t2 = SignedLog::scaled(-c2, reflected + log_normal_cdf(c2 * kappa));
    let sum = signed_log_sum(&[t1, t2]);
    if sum.total.sign > 0.0 && sum.ln_cancellation < MAX_CANCELLATION.ln() {
        return ln_pref + sum.total.ln_abs;
    }
    ln_pdf_joint_by_quadrature(s, r, model)
}

pub fn pdf_joint_sr(s: f64, r: f64, model: &Model) -> f64 {
    ln_pdf_joint_sr(s, r, model).exp()
}

/// `(1/E[T]) ∫ f(r | x) f^a(x, s) dx`, the joint density before the `x`
/// integral is done in closed form.
pub(crate) fn ln_pdf_joint_by_quadrature(s: f64, r: f64, model: &Model) -> f64 {
    let b = model.boundary();
    let (p1, p2) = (model.phase1(), model.phase2());
    let c_start = p1.mu() * s;
    let sd_start = (p1.sigma2() * s).sqrt();
    let c_end = b - p2.mu() * r;
    let sd_end = (p2.sigma2() * r).sqrt();
    let lo = (c_start - 12.0 * sd_start).min(c_end - 12.0 * sd_end);
    let f = |x: f64| (ln_r_given_x(r, x, p2, b)).exp() * pdf_x0_absorbed(x, s, p1, b);
    let v = integrate_pieces(&f, lo, b, &[c_start, c_end]);
    (p1.mu() / b).ln() + v.ln()
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, breaks: &[f64]) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|c| *c > lo && *c < hi).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);
    edges
        .windows(2)
        .map(|w| integrate_with(f, w[0], w[1], FALLBACK_REL_TOL, 1e-300).map(|e| e.value).unwrap_or(f64::NAN))
        .sum()
}
