//! Marginal and joint densities of the observed times, with their moments.
//!
//! `cargo run --example densities`

use perturbed_fpt::model::{joint_moments, moments_s, moments_x0, pdf_r, pdf_s, pdf_x0, Model};

fn main() -> perturbed_fpt::Result<()> {
    let model = Model::from_params(10.0, 1.0, 0.4, 0.1, 0.026)?;
    let b = model.boundary();
    let p1 = model.phase1();

    println!("{:>6} {:>12} {:>12}", "t", "f_S(t)", "f_R(t)");
    for t in [0.5, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        println!("{t:>6} {:>12.4e} {:>12.4e}", pdf_s(t, p1, b), pdf_r(t, &model));
    }

    println!("\nposition at the intervention:");
    for x in [-2.0, -0.5, 0.0, 5.0, 9.0, 9.9] {
        println!("  f_X0({x:>4}) = {:.4e}", pdf_x0(x, p1, b));
    }

    println!("\njoint density f(s, r):");
    for s in [1.0, 5.0, 10.0] {
        let row: Vec<String> = [10.0, 40.0, 80.0].iter().map(|&r| format!("{:.4e}", model.pdf_joint(s, r))).collect();
        println!("  s = {s:>4}: {}", row.join("  "));
    }

    let s = moments_s(p1, b);
    let x0 = moments_x0(p1, b);
    let jm = joint_moments(&model)?;
    println!("\nE[S] = {:.4}, CV(S) = {:.4}", s.mean, s.cv);
    println!("E[X(0)] = {:.4}, Var X(0) = {:.4}", x0.mean, x0.variance);
    println!("E[R] = {:.4}, CV(R) = {:.4}, Corr(S, R) = {:.4}", jm.mean_r, jm.cv_r, jm.corr_sr);
    Ok(())
}
