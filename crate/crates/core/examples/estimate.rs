//! Maximum-likelihood fits under each variance assumption, with 95% intervals.
//!
//! `cargo run --release --example estimate`

use perturbed_fpt::inference::{confidence_report, fit, fit_s_only};
use perturbed_fpt::model::{Model, Scenario};
use perturbed_fpt::sampler::{ExactSampler, RngStream};

fn main() -> perturbed_fpt::Result<()> {
    let b = 10.0;
    let cases = [
        (Model::from_params(b, 1.0, 0.4, 0.1, 0.026)?, Scenario::Unconstrained),
        (Model::from_params(b, 1.0, 0.1, 0.7, 0.1)?, Scenario::EqualVariance),
        (Model::proportional(b, 1.0, 2.0, 1.0)?, Scenario::ProportionalVariance),
    ];
    for (model, scenario) in cases {
        let sample = ExactSampler::new(model)?.sample(100, &mut RngStream::new(3, 0))?;
        let f = fit(&sample, scenario, b)?;
        println!("{scenario:?}: loglik {:.3}, restarts {}", f.loglik, f.restarts_used);
        println!("  {:<10} {:>9} {:>9} {:>9} {:>9} {:>9}", "param", "truth", "estimate", "se", "low", "high");
        let truth = scenario.contract(&model)?;
        for (p, t) in confidence_report(&f)?.iter().zip(truth) {
            println!("  {:<10} {t:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}", p.name, p.estimate, p.se, p.low, p.high);
        }
        if scenario == Scenario::Unconstrained {
            let s = fit_s_only(&sample, b)?;
            let se = s.se.unwrap_or([f64::NAN; 2]);
            println!(
                "  from s alone: mu1 {:.4} (se {:.4}), sigma1_sq {:.4} (se {:.4})",
                s.mu1, se[0], s.sigma1_sq, se[1]
            );
        }
        println!();
    }
    Ok(())
}
