//! Monte Carlo study over the four tabulated parameter rows.
//!
//! `cargo run --release --example table1 -- [reps]`

use perturbed_fpt::model::{Model, Scenario};
use perturbed_fpt::study::{format_table, run_study, StudyConfig};

fn main() -> perturbed_fpt::Result<()> {
    let reps: usize = std::env::args().nth(1).map_or(100, |a| a.parse().expect("reps must be an integer"));
    for sigma2_sq in [0.026, 0.059, 0.094, 0.131] {
        let model = Model::from_params(10.0, 1.0, 0.4, 0.1, sigma2_sq)?;
        let summary = run_study(&StudyConfig::new(model, Scenario::Unconstrained, 100, reps, 1)?)?;
        println!("sigma2_sq = {sigma2_sq}");
        println!("{}", format_table(&summary));
    }
    Ok(())
}
