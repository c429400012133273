//! Cohomologous potentials `ψ = φ + u − u∘S` give the same Gibbs measure.
//!
//! cargo run --example homology

use std::path::Path;

use sft_gibbs::files::{parse_model_file, parse_potential_file};
use sft_gibbs::gibbs::build_gibbs_measure;
use sft_gibbs::potential::check_homology;

fn main() -> sft_gibbs::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/homology");
    let file = parse_model_file(&dir.join("model.toml"))?;
    let model = &file.model;
    let phi = file.potential.expect("fixture has a potential");
    let (psi, _) = parse_potential_file(&dir.join("psi.toml"), model)?;
    let (u, _) = parse_potential_file(&dir.join("u.toml"), model)?;
    println!("ψ = φ + u − u∘S: {}", check_homology(model, &phi, &psi, &u)?);

    let a = build_gibbs_measure(model, &phi)?;
    let b = build_gibbs_measure(model, &psi)?;
    println!("pressures {:.12} {:.12}", a.pressure, b.pressure);
    let mut worst: f64 = 0.0;
    for len in 1..=6 {
        for w in model.admissible_words(len) {
            worst = worst.max((a.word_measure(&w) - b.word_measure(&w)).abs());
        }
    }
    println!("largest cylinder difference up to length 6: {worst:e}");
    Ok(())
}
