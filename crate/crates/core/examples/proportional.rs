//! Closed-form summaries when both squared diffusions are `k` times the drift.
//!
//! `cargo run --example proportional`

use perturbed_fpt::model::{joint_moments, special_case_summaries, Model};

fn main() -> perturbed_fpt::Result<()> {
    let b: f64 = 10.0;
    let (mu1, mu2) = (1.0, 2.0);
    println!("{:>8} {:>10} {:>10} {:>10} {:>12}", "k", "CV(S)", "CV(R)", "Corr", "Corr (quad)");
    for k in [0.1, 1.0, b / 3f64.sqrt(), 10.0, 50.0] {
        let c = special_case_summaries(mu1, mu2, k, b);
        let numeric = joint_moments(&Model::proportional(b, mu1, mu2, k)?)?;
        println!("{k:>8.3} {:>10.4} {:>10.4} {:>10.4} {:>12.4}", c.cv_s, c.cv_r, c.corr_sr, numeric.corr_sr);
    }
    println!("\nS and R are uncorrelated at k = B / sqrt(3) = {:.4}", b / 3f64.sqrt());
    Ok(())
}
