//! Decay of `|μ(E ∩ S^{-n}F) − μ(E)μ(F)|` against the spectral rate.
//!
//! cargo run --example mixing_decay

use std::path::Path;

use sft_gibbs::files::parse_model_file;
use sft_gibbs::gibbs::build_gibbs_measure;
use sft_gibbs::mixing::{decay_table, fitted_log_slope, subdominant_ratio};
use sft_gibbs::sft::Cylinder;

fn main() -> sft_gibbs::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden_mean_range3.toml");
    let file = parse_model_file(&path)?;
    let phi = file.potential.expect("fixture has a potential");
    let gm = build_gibbs_measure(&file.model, &phi)?;
    let rho = subdominant_ratio(&gm)?;
    println!("ρ = {rho:.9}, log ρ = {:.6}", rho.ln());

    let e = Cylinder::word(-1, &[0, 0]);
    let f = Cylinder::whole().with(1, 1);
    let rows = decay_table(&gm, &e, &f, 25)?;
    println!("{:>3}  {:>12}", "n", "gap");
    for r in rows.iter().step_by(3) {
        println!("{:>3}  {:>12.3e}", r.n, r.gap);
    }
    let tail: Vec<_> = rows.into_iter().filter(|r| r.n >= 5).collect();
    if let Some(slope) = fitted_log_slope(&tail, 1e-13) {
        println!("fitted slope of log gap: {slope:.6}");
    }
    Ok(())
}
