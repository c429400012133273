//! Parry measure of the golden mean shift and the Ising Gibbs measure on the
//! full shift: pressure, chain, entropy and a few cylinder measures.
//!
//! cargo run --example gibbs_measure

use sft_gibbs::gibbs::{build_gibbs_measure, cylinder_measure, entropy};
use sft_gibbs::potential::FiniteRangePotential;
use sft_gibbs::sft::{Cylinder, SftModel};

fn main() -> sft_gibbs::Result<()> {
    let golden = SftModel::golden_mean();
    let parry = build_gibbs_measure(&golden, &FiniteRangePotential::zero(&golden))?;
    println!("golden mean, φ = 0");
    println!("  pressure {:.12} (log of the golden ratio)", parry.pressure);
    println!("  entropy  {:.12}", entropy(&parry));
    println!("  π        {:?}", parry.stationary);
    println!("  P        {:?}", parry.stochastic);
    println!("  μ[00]    {:.12}", parry.word_measure(&[0, 0]));
    println!("  μ[11]    {}", parry.word_measure(&[1, 1]));

    let full = SftModel::full_shift(2)?;
    let beta = 0.8;
    let ising = FiniteRangePotential::from_fn(&full, 2, |w| if w[0] == w[1] { beta } else { -beta })?;
    let gm = build_gibbs_measure(&full, &ising)?;
    println!("Ising, β = {beta}");
    println!("  pressure {:.12} (log 2cosh β = {:.12})", gm.pressure, (2.0 * beta.cosh()).ln());
    println!("  c1, c2   {:.6}, {:.6}", gm.gibbs_constants.c1, gm.gibbs_constants.c2);
    let aligned = Cylinder::whole().with(0, 1).with(3, 1);
    let m = cylinder_measure(&gm, &aligned);
    println!("  μ(x0 = 1, x3 = 1) = {:.12} (exact: {})", m.value, m.exact);
    Ok(())
}
