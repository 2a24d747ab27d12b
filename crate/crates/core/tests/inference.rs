mod common;

use common::*;
use perturbed_fpt::inference::{fit, fit_s_only, loglik, loglik_s, lrt_equal_drift, starting_values, Sample};
use perturbed_fpt::model::{joint_moments, moments_x0, Model, Scenario};
use perturbed_fpt::sampler::{ExactSampler, RngStream};
use perturbed_fpt::study::{run_study, StudyConfig};

fn row1() -> Model {
    Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026).unwrap()
}

fn draw(model: Model, n: usize, seed: u64, stream: u64) -> Sample {
    ExactSampler::new(model).unwrap().sample(n, &mut RngStream::new(seed, stream)).unwrap()
}

#[test]
fn starting_values_follow_moment_formulas() {
    let m = row1();
    let sampler = ExactSampler::new(m).unwrap();
    let truth = [1.0, 0.4, 0.1, 0.026];
    let jm = joint_moments(&m).unwrap();
    // emp.var(R) also carries the spread of X(0), so the variance start targets
    // var(R) mu2^3 / (B - E X(0)) rather than sigma2^2.
    let x0 = moments_x0(m.phase1(), 10.0).mean;
    let target = jm.var_r * 0.1f64.powi(3) / (10.0 - x0);
    let mut close = [0usize; 2];
    let mut s2 = Vec::new();
    for i in 0..100 {
        let s = sampler.sample(100, &mut RngStream::new(200, i)).unwrap();
        let st = starting_values(&s, Scenario::Unconstrained, 10.0).unwrap();
        for (c, j) in close.iter_mut().zip([0, 2]) {
            *c += usize::from((st[j] / truth[j] - 1.0).abs() <= 0.5);
        }
        s2.push(st[3]);
    }
    assert!(close.iter().all(|&c| c >= 90), "{close:?}");
    let se = sd(&s2) / 10.0;
    assert!((mean(&s2) - target).abs() < 3.0 * se, "{} ± {se} vs {target}", mean(&s2));
}

#[test]
fn proportional_start_recovers_post_drift() {
    let m = Model::proportional(10.0, 1.0, 2.0, 1.0).unwrap();
    let s = draw(m, 10_000, 201, 0);
    let st = starting_values(&s, Scenario::ProportionalVariance, 10.0).unwrap();
    let r: Vec<f64> = s.r_values().collect();
    let se = st[1] * sd(&r) / (mean(&r) * (r.len() as f64).sqrt());
    assert!((st[1] - 2.0).abs() < 3.0 * se, "{} ± {se}", st[1]);
}

#[test]
fn proportional_fit_is_consistent_with_unconstrained_likelihood() {
    let m = Model::proportional(10.0, 1.0, 2.0, 1.0).unwrap();
    for stream in 0..3 {
        let s = draw(m, 100, 202, stream);
        let f = fit(&s, Scenario::ProportionalVariance, 10.0).unwrap();
        let (mu1, mu2, k) = (f.estimate[0], f.estimate[1], f.estimate[2]);
        let expanded = loglik(&s, &[mu1, k * mu1, mu2, k * mu2], Scenario::Unconstrained, 10.0).unwrap();
        assert!((expanded - f.loglik).abs() < 1e-6, "{expanded} vs {}", f.loglik);
    }
}

#[test]
fn lrt_models_are_nested() {
    for (stream, mu2) in [(0, 1.0), (1, 1.2), (2, 0.7), (3, 3.0), (4, 1.0), (5, 0.95)] {
        let m = Model::from_params(10.0, 1.0, 0.4, mu2, 0.4).unwrap();
        let t = lrt_equal_drift(&draw(m, 100, 203, stream), 10.0).unwrap();
        assert!(t.full_fit.loglik >= t.null_fit.loglik - 1e-8);
        assert!(t.statistic >= 0.0);
    }
}

#[test]
fn standard_errors_shrink_with_root_n() {
    let mean_se = |n: usize| {
        let mut acc = [0.0; 4];
        for stream in 0..10 {
            let f = fit(&draw(row1(), n, 204, stream), Scenario::Unconstrained, 10.0).unwrap();
            for (a, s) in acc.iter_mut().zip(f.se.unwrap()) {
                *a += s / 10.0;
            }
        }
        acc
    };
    let (small, large) = (mean_se(100), mean_se(400));
    for j in 0..4 {
        let ratio = small[j] / large[j];
        assert!((ratio / 2.0 - 1.0).abs() < 0.2, "param {j}: ratio {ratio}");
    }
}

#[test]
fn shared_variance_is_unbiased() {
    let m = Model::from_params(10.0, 1.0, 0.1, 0.5, 0.1).unwrap();
    let summary = run_study(&StudyConfig::new(m, Scenario::EqualVariance, 100, 200, 205).unwrap()).unwrap();
    let ok = (summary.reps - summary.failed_replications) as f64;
    for p in &summary.params {
        let se = p.emp_se / ok.sqrt();
        assert!((p.avg - p.truth).abs() < 3.0 * se, "{}: {} vs {} (± {se})", p.param, p.avg, p.truth);
    }
}

#[test]
fn s_only_fit_is_unbiased_and_less_precise() {
    let m = Model::from_params(10.0, 1.0, 0.4, 1.0, 0.1).unwrap();
    let cfg = StudyConfig::new(m, Scenario::Unconstrained, 100, 200, 206).unwrap().with_s_only(true);
    let summary = run_study(&cfg).unwrap();
    let ok = (summary.reps - summary.failed_replications) as f64;
    let s_only = summary.s_only.as_ref().unwrap();
    for p in s_only {
        let se = p.emp_se / ok.sqrt();
        assert!((p.avg - p.truth).abs() < 3.0 * se, "{}: {} vs {} (± {se})", p.param, p.avg, p.truth);
    }
    for (joint, alone) in summary.params[..2].iter().zip(s_only) {
        assert!(joint.asym_se < alone.asym_se, "{}: {} vs {}", joint.param, joint.asym_se, alone.asym_se);
    }
}

#[test]
fn s_only_objective_ignores_r() {
    let s = draw(row1(), 100, 207, 0);
    let f = fit_s_only(&s, 10.0).unwrap();
    assert_eq!(f.loglik, loglik_s(&s, f.mu1, f.sigma1_sq, 10.0).unwrap());
    let shuffled = Sample::new(
        s.pairs().iter().map(|p| perturbed_fpt::model::ObservationPair::new(p.s, 1.0 + p.r * 3.0).unwrap()).collect(),
    )
    .unwrap();
    let g = fit_s_only(&shuffled, 10.0).unwrap();
    assert_eq!((f.mu1, f.sigma1_sq), (g.mu1, g.sigma1_sq));
}
