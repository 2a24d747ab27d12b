/// A real number stored as `sign * exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY };

    pub fn new(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), ln_abs }
        }
    }

    /// `coef * exp(ln_factor)` with a possibly negative coefficient.
    pub fn scaled(coef: f64, ln_factor: f64) -> Self {
        if coef == 0.0 {
            Self::ZERO
        } else {
            Self::new(coef.signum(), coef.abs().ln() + ln_factor)
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// Result of summing signed log-domain terms.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    pub total: SignedLog,
    /// `ln(max |term| / |sum|)`; large values flag cancellation.
    pub ln_cancellation: f64,
}

/// Sums terms without leaving the log domain.
pub fn signed_log_sum(terms: &[SignedLog]) -> LogSum {
    let peak = terms.iter().filter(|t| t.sign != 0.0).map(|t| t.ln_abs).fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return LogSum { total: SignedLog::ZERO, ln_cancellation: 0.0 };
    }
    let scaled: f64 = terms.iter().filter(|t| t.sign != 0.0).map(|t| t.sign * (t.ln_abs - peak).exp()).sum();
    if scaled == 0.0 {
        return LogSum { total: SignedLog::ZERO, ln_cancellation: f64::INFINITY };
    }
    LogSum { total: SignedLog::new(scaled.signum(), peak + scaled.abs().ln()), ln_cancellation: -scaled.abs().ln() }
}

/// `ln(exp(a) - exp(b))` for `a > b`; `-inf` when `a <= b`.
pub fn ln_diff_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a <= b {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp_m1()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_mixed_signs() {
        let terms = [SignedLog::scaled(3.0, 0.0), SignedLog::scaled(-1.0, 0.0), SignedLog::scaled(0.5, 2.0f64.ln())];
        let s = signed_log_sum(&terms);
        assert!((s.total.value() - 3.0).abs() < 1e-15);
        assert!(s.ln_cancellation.abs() < 1e-15);
    }

    #[test]
    fn detects_cancellation() {
        let terms = [SignedLog::scaled(1.0, 700.0), SignedLog::scaled(-(1.0 - 1e-9), 700.0)];
        let s = signed_log_sum(&terms);
        assert!(s.ln_cancellation > 20.0);
        assert_eq!(s.total.sign, 1.0);
    }

    #[test]
    fn diff_exp() {
        assert!((ln_diff_exp(2.0f64.ln(), 0.0) - 0.0).abs() < 1e-15);
        assert_eq!(ln_diff_exp(0.0, 0.0), f64::NEG_INFINITY);
        assert_eq!(ln_diff_exp(-3.0, f64::NEG_INFINITY), -3.0);
    }
}
