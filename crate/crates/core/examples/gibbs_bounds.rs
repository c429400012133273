//! Empirical Gibbs constants from an exhaustive sweep, then a random-word
//! re-check against them.
//!
//! cargo run --example gibbs_bounds

use std::path::Path;

use sft_gibbs::files::parse_model_file;
use sft_gibbs::gibbs::{build_gibbs_measure, check_random_words, verify_gibbs_bounds};

fn main() -> sft_gibbs::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden_mean_range3.toml");
    let file = parse_model_file(&path)?;
    let phi = file.potential.expect("fixture has a potential");
    let gm = build_gibbs_measure(&file.model, &phi)?;

    let sweep = verify_gibbs_bounds(&gm, &phi, 12)?;
    println!("range-3 potential on the golden mean shift ({} chain states)", gm.state_count());
    println!("  {} words, m ≤ 12", sweep.words_checked);
    println!("  c1 ≈ {:.9} at {:?}", sweep.c1_hat, sweep.worst_low);
    println!("  c2 ≈ {:.9} at {:?}", sweep.c2_hat, sweep.worst_high);
    println!("  model constants: {:.9}, {:.9}", gm.gibbs_constants.c1, gm.gibbs_constants.c2);

    let random = check_random_words(&gm, &phi, 2000, 30, 7)?;
    println!(
        "  {} random words up to length 30: ratios in [{:.9}, {:.9}], {} outside [c1, c2]",
        random.checked, random.min_ratio, random.max_ratio, random.violations
    );
    Ok(())
}
