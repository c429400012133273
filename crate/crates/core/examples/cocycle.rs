//! The cocycle `G_N` for a transposition under the Ising potential: its
//! stabilization in `N` and the uniform bound `C`.
//!
//! cargo run --example cocycle

use sft_gibbs::perm::{FiniteSupportPermutation, WindowConfiguration};
use sft_gibbs::potential::{decay_envelope, FiniteRangePotential, DEFAULT_ALPHA};
use sft_gibbs::quasi_inv::{cocycle_bound, cocycle_g, cocycle_limit, m_of};
use sft_gibbs::sft::SftModel;

fn main() -> sft_gibbs::Result<()> {
    let model = SftModel::full_shift(2)?;
    let phi = FiniteRangePotential::from_fn(&model, 2, |w| (w[0] == 1 && w[1] == 1) as u8 as f64)?;
    let tau = FiniteSupportPermutation::transposition(1, 2);
    println!("τ = (1 2), M(τ) = {}", m_of(&tau));

    for word in [[0, 0, 1, 1], [0, 1, 0, 1], [1, 1, 0, 0], [1, 0, 1, 1]] {
        let x = WindowConfiguration::new(0, word.to_vec());
        let series: Vec<f64> = (1..=6)
            .map(|n| cocycle_g(&model, &phi, &tau, &x, n).map(|e| e.value))
            .collect::<Result<_, _>>()?;
        println!("x0..x3 = {word:?}: G_1..G_6 = {series:?}, limit {}", cocycle_limit(&model, &phi, &tau, &x)?);
    }

    let env = decay_envelope(&model, &phi, DEFAULT_ALPHA)?;
    let bound = cocycle_bound(&model, &phi, &tau, DEFAULT_ALPHA)?;
    println!("b = {}, max |F_M| = {}, C = {}", env.b, bound.max_f, bound.c);
    Ok(())
}
