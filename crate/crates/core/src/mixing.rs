//! Past/future factorization gaps with their spectral rate, and Birkhoff
//! averages along sampled trajectories.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gibbs::{cylinder_measure, sample_trajectory, GibbsMeasureModel};
use crate::linalg;
use crate::sft::Cylinder;

/// Tolerance for the subdominant-modulus iteration.
pub const RHO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationGap {
    pub n: usize,
    pub gap: f64,
    pub rate_bound: f64,
}

/// `ρ = |λ₂| / λ₁` of the stochastic matrix (`λ₁ = 1`).
pub fn subdominant_ratio(gm: &GibbsMeasureModel) -> Result<f64> {
    linalg::subdominant_modulus(&gm.stochastic, &gm.stationary, RHO_TOL, linalg::MAX_ITER)
}

fn check_supports(e: &Cylinder, f: &Cylinder) -> Result<()> {
    if let Some((_, hi)) = e.span() {
        if hi > 0 {
            return Err(Error::BadSupport(format!("E constrains position {hi} > 0")));
        }
    }
    if let Some((lo, _)) = f.span() {
        if lo < 1 {
            return Err(Error::BadSupport(format!("F constrains position {lo} < 1")));
        }
    }
    Ok(())
}

fn raw_gap(gm: &GibbsMeasureModel, e: &Cylinder, f: &Cylinder, mu_e: f64, mu_f: f64, n: usize) -> f64 {
    let joint = cylinder_measure(gm, &e.intersect(&f.shifted(n as i64))).value;
    (joint - mu_e * mu_f).abs()
}

/// `|μ(E ∩ S^{−n}F) − μ(E) μ(F)|` for `E` in the past (positions ≤ 0) and `F`
/// in the future (positions ≥ 1), with the bound `K₀ ρⁿ`, `K₀ = gap(1)/ρ`.
pub fn factorization_gap(gm: &GibbsMeasureModel, e: &Cylinder, f: &Cylinder, n: usize) -> Result<FactorizationGap> {
    let rho = subdominant_ratio(gm)?;
    factorization_gap_with(gm, e, f, n, rho)
}

pub fn factorization_gap_with(
    gm: &GibbsMeasureModel,
    e: &Cylinder,
    f: &Cylinder,
    n: usize,
    rho: f64,
) -> Result<FactorizationGap> {
    check_supports(e, f)?;
    let mu_e = cylinder_measure(gm, e).value;
    let mu_f = cylinder_measure(gm, f).value;
    let gap = raw_gap(gm, e, f, mu_e, mu_f, n);
    let rate_bound = if rho > 0.0 {
        raw_gap(gm, e, f, mu_e, mu_f, 1) / rho * rho.powi(n as i32)
    } else if n + 2 >= gm.state_count() {
        // P − 1π is then nilpotent on the (states − 1)-dimensional complement of 1
        0.0
    } else {
        f64::INFINITY
    };
    Ok(FactorizationGap { n, gap, rate_bound })
}

/// Gaps for `n = 0..=n_max`.
pub fn decay_table(gm: &GibbsMeasureModel, e: &Cylinder, f: &Cylinder, n_max: usize) -> Result<Vec<FactorizationGap>> {
    let rho = subdominant_ratio(gm)?;
    check_supports(e, f)?;
    (0..=n_max)
        .into_par_iter()
        .map(|n| factorization_gap_with(gm, e, f, n, rho))
        .collect()
}

/// `n,gap,bound` rows.
pub fn decay_csv(rows: &[FactorizationGap]) -> String {
    let mut out = String::from("n,gap,bound\n");
    for r in rows {
        out.push_str(&format!("{},{:e},{:e}\n", r.n, r.gap, r.rate_bound));
    }
    out
}

/// Largest gap over `E = {x_0 = a}`, `F = {x_1 = b}`.
pub fn max_single_symbol_gap(gm: &GibbsMeasureModel, n: usize) -> f64 {
    let k = gm.base().alphabet_size();
    (0..k * k)
        .into_par_iter()
        .map(|ab| {
            let e = Cylinder::whole().with(0, ab / k);
            let f = Cylinder::whole().with(1, ab % k);
            let mu_e = cylinder_measure(gm, &e).value;
            let mu_f = cylinder_measure(gm, &f).value;
            raw_gap(gm, &e, &f, mu_e, mu_f, n)
        })
        .reduce(|| 0.0, f64::max)
}

/// Least-squares slope of `log gap` against `n` over the points with
/// `gap > floor`. `None` with fewer than two such points.
pub fn fitted_log_slope(rows: &[FactorizationGap], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.gap > floor)
        .map(|r| (r.n as f64, r.gap.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Frequency of the cylinder at start positions `1..=q` of one seeded
/// trajectory.
pub fn birkhoff_average(gm: &GibbsMeasureModel, cylinder: &Cylinder, q: usize, seed: u64) -> Result<f64> {
    if q == 0 {
        return Err(Error::BadParameters("Q must be at least 1".into()));
    }
    let Some((lo, hi)) = cylinder.span() else {
        return Ok(1.0);
    };
    let len = q + (hi - lo) as usize;
    let traj = sample_trajectory(gm, len, seed);
    // traj.symbols[i] sits at position i + 1 + lo
    let hits = (1..=q as i64)
        .filter(|&t| {
            cylinder
                .iter()
                .all(|(p, set)| set.contains(&traj.symbols[(t + p - 1 - lo) as usize]))
        })
        .count();
    Ok(hits as f64 / q as f64)
}

/// Standard error of a Birkhoff average of an event with probability `p`
/// over `q` steps, inflated by `(1 + ρ)/(1 − ρ)` for autocorrelation.
pub fn birkhoff_standard_error(p: f64, q: usize, rho: f64) -> f64 {
    (p * (1.0 - p) / q as f64 * (1.0 + rho) / (1.0 - rho)).sqrt()
}
