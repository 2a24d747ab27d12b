//! Standard errors and test power as one parameter varies; writes plot-ready CSV.
//!
//! `cargo run --release --example sweep -- [reps] [out.csv]`

use std::fs::File;
use std::io::BufWriter;

use perturbed_fpt::model::{Model, Scenario};
use perturbed_fpt::study::{log_grid, run_sweep, write_sweep_csv, StudyConfig, SweepAxis};

fn main() -> perturbed_fpt::Result<()> {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().map_or(50, |a| a.parse().expect("reps must be an integer"));
    let out = args.next();

    let base = StudyConfig::new(Model::from_params(10.0, 1.0, 0.4, 1.0, 0.1)?, Scenario::Unconstrained, 100, reps, 2)?
        .with_s_only(true);
    let points = run_sweep(&base, SweepAxis::Mu2, &log_grid(0.1, 10.0, 8))?;
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "mu2", "se mu1", "se mu1 (s)", "se s1", "se s1 (s)");
    for p in &points {
        let (joint, alone) = (&p.summary.params, p.summary.s_only.as_ref().expect("s-only fits requested"));
        println!(
            "{:>8.3} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            p.value, joint[0].emp_se, alone[0].emp_se, joint[1].emp_se, alone[1].emp_se
        );
    }

    let eq = StudyConfig::new(Model::from_params(10.0, 1.0, 0.1, 1.0, 0.1)?, Scenario::EqualVariance, 100, reps, 3)?
        .with_lrt(true);
    let power = run_sweep(&eq, SweepAxis::Mu2, &[0.6, 0.8, 1.0, 1.2, 1.4])?;
    println!("\n{:>8} {:>10}", "mu2", "reject %");
    for p in &power {
        println!("{:>8} {:>10.1}", p.value, p.summary.lrt_rejection_percent.unwrap_or(f64::NAN));
    }

    if let Some(path) = out {
        let file = File::create(&path).map_err(|e| perturbed_fpt::Error::Io(e.to_string()))?;
        write_sweep_csv(BufWriter::new(file), &points)?;
        println!("wrote {path}");
    }
    Ok(())
}
