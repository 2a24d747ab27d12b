//! Likelihood-ratio test of equal drifts before and after the intervention.
//!
//! `cargo run --release --example lrt`

use perturbed_fpt::inference::lrt_equal_drift;
use perturbed_fpt::model::Model;
use perturbed_fpt::sampler::{ExactSampler, RngStream};

fn main() -> perturbed_fpt::Result<()> {
    let b = 10.0;
    println!("{:>6} {:>10} {:>8} {:>10} {:>10}", "mu2", "statistic", "reject", "mu1 hat", "mu2 hat");
    for (i, mu2) in [0.6, 0.8, 1.0, 1.2, 1.4, 10.0].into_iter().enumerate() {
        let model = Model::from_params(b, 1.0, 0.1, mu2, 0.1)?;
        let sample = ExactSampler::new(model)?.sample(100, &mut RngStream::new(5, i as u64))?;
        let t = lrt_equal_drift(&sample, b)?;
        let est = &t.full_fit.estimate;
        println!("{mu2:>6} {:>10.3} {:>8} {:>10.4} {:>10.4}", t.statistic, t.reject, est[0], est[1]);
    }
    Ok(())
}
