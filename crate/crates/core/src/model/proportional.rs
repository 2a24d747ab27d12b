//! The special case `sigma_i^2 = k mu_i`, where `S` and `R` are the backward
//! and forward recurrence times of two inverse Gaussian laws and every summary
//! has a closed form.

use serde::{Deserialize, Serialize};

use crate::numerics::LN_SQRT_2PI;

/// `ln f(s, r) = ln(mu1 mu2 / B) + ln f_IG(B, B^2/k)(mu1 s + mu2 r)`.
pub fn ln_pdf_joint_sr_proportional(s: f64, r: f64, mu1: f64, mu2: f64, k: f64, b: f64) -> f64 {
    let t = mu1 * s + mu2 * r;
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (mu1 * mu2).ln() - LN_SQRT_2PI - 0.5 * (k * t.powi(3)).ln() - (b - t).powi(2) / (2.0 * k * t)
}

pub fn pdf_joint_sr_proportional(s: f64, r: f64, mu1: f64, mu2: f64, k: f64, b: f64) -> f64 {
    ln_pdf_joint_sr_proportional(s, r, mu1, mu2, k, b).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionalSummary {
    pub mean_s: f64,
    pub var_s: f64,
    pub cv_s: f64,
    pub mean_r: f64,
    pub var_r: f64,
    pub cv_r: f64,
    pub cov_sr: f64,
    pub corr_sr: f64,
}

pub fn special_case_summaries(mu1: f64, mu2: f64, k: f64, b: f64) -> ProportionalSummary {
    let cv = (b + 3.0 * k) / (3f64.sqrt() * (b + k));
    let spread = (b + 3.0 * k).powi(2) / 12.0;
    ProportionalSummary {
        mean_s: (b + k) / (2.0 * mu1),
        var_s: spread / (mu1 * mu1),
        cv_s: cv,
        mean_r: (b + k) / (2.0 * mu2),
        var_r: spread / (mu2 * mu2),
        cv_r: cv,
        cov_sr: (3.0 * k * k - b * b) / (12.0 * mu1 * mu2),
        corr_sr: (3.0 * k * k - b * b) / (b + 3.0 * k).powi(2),
    }
}
