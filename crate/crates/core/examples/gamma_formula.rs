//! Membership in `Γ_{P,k}` for the block swap, decided directly and through
//! the `C_k ∩ S^{-P} D_k` union, on every admissible window.
//!
//! cargo run --example gamma_formula

use sft_gibbs::perm::{apply_permutation, gamma_p_formula_check, FiniteSupportPermutation, WindowConfiguration};
use sft_gibbs::sft::SftModel;

fn main() -> sft_gibbs::Result<()> {
    let model = SftModel::golden_mean();
    let (p, k) = (5, 2);
    let sigma = FiniteSupportPermutation::swap_involution(p, k)?;
    println!("σ_{{{p},{k}}} moves {:?}", sigma.pairs().collect::<Vec<_>>());

    let x = WindowConfiguration::new(0, vec![0, 1, 0, 1, 0, 0, 0, 1, 0]);
    let image = apply_permutation(&sigma, &x)?;
    println!("x      = {:?}\nT_σ x  = {:?}", x.symbols, image.symbols);

    let len = (p + k + 2) as usize;
    let (mut inside, mut total) = (0, 0);
    for word in model.admissible_words(len) {
        let check = gamma_p_formula_check(&model, p, k, &WindowConfiguration::new(0, word.clone()))?;
        assert_eq!(check.direct, check.formula, "routes disagree on {word:?}");
        total += 1;
        inside += check.direct as usize;
    }
    println!("{inside} of {total} admissible windows of length {len} lie in Γ; both routes agree");
    Ok(())
}
