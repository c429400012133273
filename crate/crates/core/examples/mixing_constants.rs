//! Primitivity exponent and the constants `k0`, `P0` for a few subshifts.
//!
//! cargo run --example mixing_constants

use sft_gibbs::sft::{check_mixing, compute_k0, compute_p0, q_pairs, wielandt_bound, SftModel};

fn main() -> sft_gibbs::Result<()> {
    let models = [
        ("golden mean", SftModel::golden_mean()),
        ("full 2-shift", SftModel::full_shift(2)?),
        ("3-cycle with a loop", SftModel::new(3, &[vec![1, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])?),
        ("period 2", SftModel::new(2, &[vec![0, 1], vec![1, 0]])?),
    ];
    for (name, model) in &models {
        let report = check_mixing(model);
        println!("{name}");
        println!("  mixing: {}  M: {:?}  Wielandt bound: {}", report.is_mixing, report.exponent, wielandt_bound(model.alphabet_size()));
        if !report.is_mixing {
            continue;
        }
        let k0 = compute_k0(model)?;
        println!("  |Q| = {}  k0 = {k0}", q_pairs(model).len());
        for k in k0..k0 + 3 {
            println!("  k = {k}: P0 = {}", compute_p0(model, k)?);
        }
    }
    Ok(())
}
