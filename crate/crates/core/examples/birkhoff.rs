//! Seeded trajectories and Birkhoff averages compared with exact cylinder
//! measures.
//!
//! cargo run --example birkhoff

use sft_gibbs::gibbs::{build_gibbs_measure, cylinder_measure, sample_trajectory};
use sft_gibbs::mixing::{birkhoff_average, birkhoff_standard_error, subdominant_ratio};
use sft_gibbs::potential::FiniteRangePotential;
use sft_gibbs::sft::{Cylinder, SftModel};

fn main() -> sft_gibbs::Result<()> {
    let model = SftModel::golden_mean();
    let gm = build_gibbs_measure(&model, &FiniteRangePotential::zero(&model))?;
    let rho = subdominant_ratio(&gm)?;

    let path = sample_trajectory(&gm, 60, 1);
    let text: String = path.symbols.iter().map(|&s| model.name(s)).collect();
    println!("sample: {text}");

    let q = 200_000;
    for cyl in [
        Cylinder::whole().with(0, 0),
        Cylinder::word(0, &[0, 1, 0]),
        Cylinder::whole().with(0, 1).with(2, 1),
    ] {
        let exact = cylinder_measure(&gm, &cyl).value;
        let avg = birkhoff_average(&gm, &cyl, q, 2024)?;
        let se = birkhoff_standard_error(exact, q, rho);
        println!("{cyl:?}: exact {exact:.6}, average {avg:.6}, |diff| / se = {:.2}", (avg - exact).abs() / se);
    }
    Ok(())
}
