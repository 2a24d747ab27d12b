use perturbed_fpt::model::{
    joint_moments, moments_x0, pdf_r, pdf_s, pdf_x0, special_case_summaries, Model, WienerPhase,
};
use perturbed_fpt::numerics::integrate;
use proptest::prelude::*;

fn models() -> Vec<Model> {
    vec![
        Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026).unwrap(),
        Model::from_params(10.0, 1.0, 0.4, 0.1, 0.131).unwrap(),
        Model::from_params(10.0, 1.0, 0.1, 1.4, 0.1).unwrap(),
        Model::from_params(5.0, 0.5, 1.0, 3.0, 0.2).unwrap(),
    ]
}

#[test]
fn r_moments_match_conditional_moment_identities() {
    // R | X(0) = x is inverse Gaussian with mean (B - x)/mu2 and variance (B - x) sigma2^2 / mu2^3.
    for m in models() {
        let b = m.boundary();
        let x0 = moments_x0(m.phase1(), b);
        let (mu2, s2) = (m.phase2().mu(), m.phase2().sigma2());
        let mean_r = (b - x0.mean) / mu2;
        let var_r = (b - x0.mean) * s2 / mu2.powi(3) + x0.variance / (mu2 * mu2);
        let jm = joint_moments(&m).unwrap();
        assert!((jm.mean_r / mean_r - 1.0).abs() < 1e-6, "{m:?}: {} vs {mean_r}", jm.mean_r);
        assert!((jm.var_r / var_r - 1.0).abs() < 1e-5, "{m:?}: {} vs {var_r}", jm.var_r);
    }
}

#[test]
fn proportional_joint_moments_match_closed_forms() {
    for &(mu1, mu2, k) in &[(1.0, 2.0, 1.0), (1.0, 0.5, 0.3), (2.0, 1.0, 8.0)] {
        let jm = joint_moments(&Model::proportional(10.0, mu1, mu2, k).unwrap()).unwrap();
        let cf = special_case_summaries(mu1, mu2, k, 10.0);
        assert!((jm.mean_r / cf.mean_r - 1.0).abs() < 1e-6);
        assert!((jm.var_r / cf.var_r - 1.0).abs() < 1e-5);
        assert!((jm.cov_sr - cf.cov_sr).abs() < 1e-5 * cf.cov_sr.abs().max(cf.var_s), "{} {}", jm.cov_sr, cf.cov_sr);
        assert!((jm.corr_sr - cf.corr_sr).abs() < 1e-5);
    }
}

#[test]
fn no_effect_forward_and_backward_times_agree() {
    let m = Model::no_effect(10.0, 1.0, 0.4).unwrap();
    for &t in &[0.01, 0.5, 3.0, 5.2, 10.0, 17.0, 30.0] {
        let (fr, fs) = (pdf_r(t, &m), pdf_s(t, m.phase1(), 10.0));
        assert!((fr - fs).abs() < 1e-9 * fs.max(1e-300), "t = {t}: {fr} vs {fs}");
    }
}

#[test]
fn start_position_density_has_closed_form_mean() {
    for m in models() {
        let b = m.boundary();
        let mom = moments_x0(m.phase1(), b);
        let lo = -40.0 * b;
        let mean = integrate(|x| x * pdf_x0(x, m.phase1(), b), lo, b, 1e-10).unwrap();
        assert!((mean - mom.mean).abs() < 1e-7 * b, "{mean} vs {}", mom.mean);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn joint_density_is_finite_and_nonnegative(
        s in 1e-3f64..40.0, r in 1e-3f64..200.0,
        mu1 in 0.2f64..3.0, s1 in 0.02f64..3.0, mu2 in 0.05f64..5.0, s2 in 0.01f64..3.0,
    ) {
        let m = Model::from_params(10.0, mu1, s1, mu2, s2).unwrap();
        let f = m.pdf_joint(s, r);
        prop_assert!(f.is_finite() && f >= 0.0);
        let lf = m.ln_pdf_joint(s, r);
        if f > 1e-250 {
            prop_assert!((lf.exp() / f - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn s_density_is_decreasing(s in 0.0f64..40.0, ds in 1e-6f64..5.0, mu in 0.2f64..3.0, s2 in 0.02f64..3.0) {
        let p = WienerPhase::new(mu, s2).unwrap();
        prop_assert!(pdf_s(s + ds, &p, 10.0) <= pdf_s(s, &p, 10.0));
    }
}
