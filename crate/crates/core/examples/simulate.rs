//! Exact simulation of (s, r) pairs, checked against the Euler–Maruyama path oracle.
//!
//! `cargo run --release --example simulate -- [n] [out.csv]`

use std::fs::File;
use std::io::BufWriter;

use perturbed_fpt::cli::write_pairs;
use perturbed_fpt::model::{joint_moments, Model};
use perturbed_fpt::sampler::{oracle_sample_pair, ExactSampler, OracleConfig, RngStream};

fn main() -> perturbed_fpt::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20_000, |a| a.parse().expect("n must be an integer"));
    let out = args.next();

    let model = Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026)?;
    let sampler = ExactSampler::new(model)?;
    let sample = sampler.sample(n, &mut RngStream::new(7, 0))?;

    let cfg = OracleConfig::new(1e-2, 16)?;
    let mut rng = RngStream::new(7, 1);
    let oracle: Vec<_> = (0..n / 10).map(|_| oracle_sample_pair(&model, &cfg, &mut rng)).collect::<Result<_, _>>()?;

    let mean = |v: &mut dyn Iterator<Item = f64>, len: usize| v.sum::<f64>() / len as f64;
    let jm = joint_moments(&model)?;
    println!("{:>10} {:>10} {:>10}", "", "mean s", "mean r");
    println!("{:>10} {:>10.4} {:>10.4}", "exact", mean(&mut sample.s_values(), n), mean(&mut sample.r_values(), n));
    println!(
        "{:>10} {:>10.4} {:>10.4}",
        "oracle",
        mean(&mut oracle.iter().map(|p| p.s), oracle.len()),
        mean(&mut oracle.iter().map(|p| p.r), oracle.len())
    );
    println!("{:>10} {:>10.4} {:>10.4}", "quadrature", jm.mean_s, jm.mean_r);

    if let Some(path) = out {
        let file = File::create(&path).map_err(|e| perturbed_fpt::Error::Io(e.to_string()))?;
        write_pairs(BufWriter::new(file), sample.pairs())?;
        println!("wrote {n} pairs to {path}");
    }
    Ok(())
}
