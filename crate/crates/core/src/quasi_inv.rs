//! Permutation cocycles, Radon–Nikodym ratios on cylinders and the
//! quasi-invariance sandwich.
//!
//! `G_N(x) = Σ_{q=−N}^{N−1} (φ(S^q T_τ x) − φ(S^q x))`. A term can be nonzero
//! only when `[q, q+r−1]` meets the support of `τ`, so every sum below runs
//! over that finite set of `q` and is exact.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gibbs::{cylinder_measure, GibbsMeasureModel};
use crate::perm::{FiniteSupportPermutation, WindowConfiguration};
use crate::potential::{decay_envelope, FiniteRangePotential};
use crate::sft::{Cylinder, SftModel, Symbol};

/// Relative slack allowed on ratio comparisons, for rounding only.
pub const RATIO_REL_TOL: f64 = 1e-12;

/// `M(τ) = 1 + max |moved point|`.
pub fn m_of(tau: &FiniteSupportPermutation) -> i64 {
    tau.support_radius()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CocycleEvaluation {
    #[serde(rename = "N")]
    pub n: i64,
    pub value: f64,
    pub stabilized: bool,
    pub h_part: f64,
    pub f_part: f64,
}

/// Positions of `x` read by the nonzero terms of the cocycle.
pub fn cocycle_needs(tau: &FiniteSupportPermutation, r: usize) -> Option<(i64, i64)> {
    let (lo, hi) = tau.support_span()?;
    Some((lo - r as i64 + 1, hi + r as i64 - 1))
}

/// `(φ(S^q T_τ x), φ(S^q x))`.
fn term(phi: &FiniteRangePotential, tau: &FiniteSupportPermutation, x: &WindowConfiguration, q: i64) -> Result<(f64, f64)> {
    let r = phi.range();
    let word = x.slice(q, r).expect("window checked by caller");
    let image: Vec<Symbol> = (0..r as i64)
        .map(|i| x.get(tau.apply(q + i)).expect("window checked by caller"))
        .collect();
    let base = phi
        .value(word)
        .ok_or_else(|| Error::BadParameters(format!("window is not admissible at {q}")))?;
    let moved = phi.value(&image).ok_or(Error::OutsideGamma)?;
    Ok((moved, base))
}

/// `Σ moved − Σ base` with both sums taken in sorted order, so that equal
/// multisets (as for range-1 potentials) cancel to exactly zero.
fn difference_of_sums(mut moved: Vec<f64>, mut base: Vec<f64>) -> f64 {
    let sum = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.iter().sum::<f64>()
    };
    sum(&mut moved) - sum(&mut base)
}

/// `G_N(x)` split into `H_N` (terms with `q ≤ −M(τ)`) and `F_N` (the rest).
///
/// The window must cover the coordinates read by the nonzero terms, that is
/// the support of `τ` widened by `r − 1` on both sides.
pub fn cocycle_g(
    model: &SftModel,
    phi: &FiniteRangePotential,
    tau: &FiniteSupportPermutation,
    window: &WindowConfiguration,
    n: i64,
) -> Result<CocycleEvaluation> {
    if n < 1 {
        return Err(Error::BadParameters("N must be at least 1".into()));
    }
    phi.check_model(model)?;
    let r = phi.range();
    let m = m_of(tau);
    let mut eval = CocycleEvaluation {
        n,
        value: 0.0,
        stabilized: n >= m + r as i64,
        h_part: 0.0,
        f_part: 0.0,
    };
    let Some((need_lo, need_hi)) = cocycle_needs(tau, r) else {
        return Ok(eval);
    };
    let q_lo = need_lo.max(-n);
    let q_hi = (need_hi - r as i64 + 1).min(n - 1);
    if q_lo <= q_hi {
        window.require(q_lo, q_hi + r as i64 - 1)?;
    }
    let (mut h, mut f) = ((Vec::new(), Vec::new()), (Vec::new(), Vec::new()));
    for q in q_lo..=q_hi {
        let (moved, base) = term(phi, tau, window, q)?;
        let part = if q <= -m { &mut h } else { &mut f };
        part.0.push(moved);
        part.1.push(base);
    }
    eval.h_part = difference_of_sums(h.0, h.1);
    eval.f_part = difference_of_sums(f.0, f.1);
    eval.value = eval.h_part + eval.f_part;
    Ok(eval)
}

/// `lim_N G_N(x)`, reached exactly at `N = M(τ) + r`.
pub fn cocycle_limit(
    model: &SftModel,
    phi: &FiniteRangePotential,
    tau: &FiniteSupportPermutation,
    window: &WindowConfiguration,
) -> Result<f64> {
    Ok(cocycle_g(model, phi, tau, window, m_of(tau) + phi.range() as i64)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CocycleBound {
    /// `max_x |F_{M(τ)}(x)|` over local windows in `Γ_τ`.
    pub max_f: f64,
    /// `b / (1 − α)`.
    pub tail: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Uniform bound `C ≥ sup_{N ≥ M(τ)} sup_x |G_N(x)|`.
pub fn cocycle_bound(
    model: &SftModel,
    phi: &FiniteRangePotential,
    tau: &FiniteSupportPermutation,
    alpha: f64,
) -> Result<CocycleBound> {
    let env = decay_envelope(model, phi, alpha)?;
    let r = phi.range() as i64;
    let m = m_of(tau);
    let mut max_f: f64 = 0.0;
    if let (Some((lo, hi)), Some((need_lo, need_hi))) = (tau.support_span(), cocycle_needs(tau, phi.range())) {
        let q_lo = need_lo.max(-m + 1);
        let q_hi = (need_hi - r + 1).min(m - 1);
        let span_lo = (lo - 1).min(q_lo);
        let span_hi = (hi + 1).max(q_hi + r - 1);
        for word in model.admissible_words((span_hi - span_lo + 1) as usize) {
            let x = WindowConfiguration::new(span_lo, word);
            let image: Vec<Symbol> = (lo - 1..=hi + 1)
                .map(|n| x.get(tau.apply(n)).unwrap())
                .collect();
            if !model.is_admissible(&image) {
                continue;
            }
            let (mut moved, mut base) = (Vec::new(), Vec::new());
            for q in q_lo..=q_hi {
                let (a, b) = term(phi, tau, &x, q)?;
                moved.push(a);
                base.push(b);
            }
            max_f = max_f.max(difference_of_sums(moved, base).abs());
        }
    }
    Ok(CocycleBound {
        max_f,
        tail: env.tail_bound,
        c: max_f + env.tail_bound,
    })
}

/// `T_σ^{-1} C`: the constraint of `C` at `n` is carried to `σ(n)`.
pub fn pullback(sigma: &FiniteSupportPermutation, cylinder: &Cylinder) -> Cylinder {
    let mut out = Cylinder::whole();
    for (n, set) in cylinder.iter() {
        out = out
            .with_set(sigma.apply(n), set.clone())
            .expect("sets of a valid cylinder are nonempty");
    }
    out
}

fn require_constrained_support(sigma: &FiniteSupportPermutation, cylinder: &Cylinder) -> Result<()> {
    if let Some((lo, hi)) = sigma.support_span() {
        let (c_lo, c_hi) = cylinder.span().unwrap_or((0, -1));
        if sigma.moved_points().any(|p| cylinder.get(p).is_none()) {
            return Err(Error::WindowTooSmall {
                need_lo: lo,
                need_hi: hi,
                have_lo: c_lo,
                have_hi: c_hi,
            });
        }
    }
    Ok(())
}

/// `μ(T_σ^{-1} C) / μ(C)`. Every moved point of `σ` must be constrained by `C`.
pub fn rn_ratio(gm: &GibbsMeasureModel, sigma: &FiniteSupportPermutation, cylinder: &Cylinder) -> Result<f64> {
    require_constrained_support(sigma, cylinder)?;
    let mu = cylinder_measure(gm, cylinder).value;
    if mu == 0.0 {
        return Err(Error::NullCylinder);
    }
    Ok(cylinder_measure(gm, &pullback(sigma, cylinder)).value / mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderRow {
    pub word: String,
    pub mu: f64,
    pub mu_pullback: f64,
    pub ratio: f64,
    pub log_ratio: f64,
    pub cocycle: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionCheck {
    pub label: String,
    pub mu: f64,
    pub mu_pullback: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiInvarianceReport {
    #[serde(rename = "N")]
    pub n: i64,
    pub c1: f64,
    pub c2: f64,
    pub cocycle_bound: CocycleBound,
    pub alpha_bound: f64,
    pub beta_bound: f64,
    pub tolerance: f64,
    pub rows: Vec<CylinderRow>,
    /// Admissible words whose pullback is inadmissible (outside `Γ_σ`).
    pub excluded: usize,
    pub union_checks: Vec<UnionCheck>,
    pub violations: Vec<String>,
    pub pass: bool,
}

impl QuasiInvarianceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("word,mu,mu_pullback,ratio,log_ratio,cocycle,pass\n");
        for r in &self.rows {
            let cocycle = r.cocycle.map_or(String::new(), |c| format!("{c:e}"));
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{},{}\n",
                r.word, r.mu, r.mu_pullback, r.ratio, r.log_ratio, cocycle, r.pass
            ));
        }
        out
    }
}

fn within(lo: f64, x: f64, hi: f64) -> bool {
    lo * (1.0 - RATIO_REL_TOL) <= x && x <= hi * (1.0 + RATIO_REL_TOL)
}

fn word_label(model: &SftModel, word: &[Symbol]) -> String {
    let names: Vec<&str> = word.iter().map(|&s| model.name(s)).collect();
    if names.iter().all(|n| n.chars().count() == 1) {
        names.concat()
    } else {
        names.join(".")
    }
}

/// Full words on `[−N, N]` inside `Γ_σ`, paired with their pullback words.
fn gamma_words(model: &SftModel, sigma: &FiniteSupportPermutation, n: i64) -> (Vec<(Vec<Symbol>, Vec<Symbol>)>, usize) {
    let mut excluded = 0;
    let mut out = Vec::new();
    for word in model.admissible_words((2 * n + 1) as usize) {
        let x = WindowConfiguration::new(-n, word);
        // x' with x'_{σ(j)} = x_j; for an involution x'_m = x_{σ(m)}
        let pre: Vec<Symbol> = (-n..=n).map(|m| x.get(sigma.apply(m)).unwrap()).collect();
        if model.is_admissible(&pre) {
            out.push((x.symbols, pre));
        } else {
            excluded += 1;
        }
    }
    (out, excluded)
}

fn check_involution(sigma: &FiniteSupportPermutation, n: i64) -> Result<()> {
    if !sigma.is_involution() {
        return Err(Error::NotInvolution);
    }
    let m = m_of(sigma);
    if n < m {
        return Err(Error::WindowTooSmall {
            need_lo: -m,
            need_hi: m,
            have_lo: -n,
            have_hi: n,
        });
    }
    Ok(())
}

/// Checks `α μ(C) ≤ μ(T_σ^{-1}C) ≤ β μ(C)` on every full cylinder on
/// `[−N, N]` inside `Γ_σ`, and on unions of them.
pub fn verify_quasi_invariance(
    gm: &GibbsMeasureModel,
    phi: &FiniteRangePotential,
    sigma: &FiniteSupportPermutation,
    n: i64,
    alpha: f64,
) -> Result<QuasiInvarianceReport> {
    check_involution(sigma, n)?;
    let model = gm.base();
    let bound = cocycle_bound(model, phi, sigma, alpha)?;
    let (c1, c2) = (gm.gibbs_constants.c1, gm.gibbs_constants.c2);
    let alpha_bound = c1 / c2 * (-bound.c).exp();
    let beta_bound = c2 / c1 * bound.c.exp();
    let (words, excluded) = gamma_words(model, sigma, n);
    let covered = cocycle_needs(sigma, phi.range()).is_none_or(|(lo, hi)| -n <= lo && hi <= n);

    let rows: Vec<CylinderRow> = words
        .par_iter()
        .map(|(word, pre)| -> Result<CylinderRow> {
            let mu = gm.word_measure(word);
            let mu_pullback = gm.word_measure(pre);
            let ratio = mu_pullback / mu;
            let cocycle = if covered {
                Some(cocycle_limit(model, phi, sigma, &WindowConfiguration::new(-n, word.clone()))?)
            } else {
                None
            };
            Ok(CylinderRow {
                word: word_label(model, word),
                mu,
                mu_pullback,
                ratio,
                log_ratio: ratio.ln(),
                cocycle,
                pass: within(alpha_bound, ratio, beta_bound),
            })
        })
        .collect::<Result<_>>()?;

    let mut union_checks = Vec::new();
    let mut push_union = |label: String, rows: &mut dyn Iterator<Item = &CylinderRow>| {
        let (mu, mu_pullback) = rows.fold((0.0, 0.0), |(a, b), r| (a + r.mu, b + r.mu_pullback));
        if mu > 0.0 {
            union_checks.push(UnionCheck {
                label,
                mu,
                mu_pullback,
                pass: within(alpha_bound * mu, mu_pullback, beta_bound * mu),
            });
        }
    };
    push_union("all".into(), &mut rows.iter());
    for s in 0..model.alphabet_size() {
        for (pos, idx) in [(-n, 0usize), (n, 2 * n as usize)] {
            let mut it = rows
                .iter()
                .zip(&words)
                .filter(|(_, (w, _))| w[idx] == s)
                .map(|(r, _)| r);
            push_union(format!("x[{pos}]={}", model.name(s)), &mut it);
        }
    }

    let mut violations: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.word.clone()).collect();
    violations.extend(union_checks.iter().filter(|u| !u.pass).map(|u| format!("union {}", u.label)));
    Ok(QuasiInvarianceReport {
        n,
        c1,
        c2,
        cocycle_bound: bound,
        alpha_bound,
        beta_bound,
        tolerance: RATIO_REL_TOL,
        pass: violations.is_empty(),
        rows,
        excluded,
        union_checks,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRow {
    pub word: String,
    pub log_ratio: f64,
    /// Range of the cocycle over admissible extensions of the word.
    pub cocycle_min: f64,
    pub cocycle_max: f64,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleIdentityReport {
    #[serde(rename = "N")]
    pub n: i64,
    pub c1: f64,
    pub c2: f64,
    /// `log(c2/c1)`, the allowed size of the residual `log ratio − cocycle`.
    pub bound: f64,
    pub tolerance: f64,
    pub residual_min: f64,
    pub residual_max: f64,
    pub rows: Vec<IdentityRow>,
    pub excluded: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// All admissible words `w` of length `left + word.len() + right` with
/// `w[left..left + word.len()] == word`.
fn extensions(model: &SftModel, word: &[Symbol], left: usize, right: usize) -> Vec<Vec<Symbol>> {
    let n = model.alphabet_size();
    let mut lefts: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..left {
        lefts = lefts
            .into_iter()
            .flat_map(|tail| {
                let head = tail.first().copied().unwrap_or(word[0]);
                (0..n).filter(move |&s| model.allowed(s, head)).map(move |s| {
                    let mut v = vec![s];
                    v.extend(&tail);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<Symbol>> = lefts
        .into_iter()
        .map(|mut v| {
            v.extend_from_slice(word);
            v
        })
        .collect();
    for _ in 0..right {
        out = out
            .into_iter()
            .flat_map(|v| {
                let last = *v.last().unwrap();
                (0..n).filter(move |&s| model.allowed(last, s)).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Compares `log μ(T_σ^{-1}C)/μ(C)` with the cocycle limit on every full
/// cylinder on `[−N, N]` inside `Γ_σ`. When the cocycle reads coordinates
/// outside the window it is evaluated on every admissible extension.
pub fn verify_cocycle_identity(
    gm: &GibbsMeasureModel,
    phi: &FiniteRangePotential,
    sigma: &FiniteSupportPermutation,
    n: i64,
) -> Result<CocycleIdentityReport> {
    check_involution(sigma, n)?;
    let model = gm.base();
    let (c1, c2) = (gm.gibbs_constants.c1, gm.gibbs_constants.c2);
    let bound = (c2 / c1).ln();
    let tol = 1e-9;
    let (words, excluded) = gamma_words(model, sigma, n);
    let (left, right) = match cocycle_needs(sigma, phi.range()) {
        Some((lo, hi)) => ((-n - lo).max(0) as usize, (hi - n).max(0) as usize),
        None => (0, 0),
    };
    let rows: Vec<IdentityRow> = words
        .par_iter()
        .map(|(word, pre)| -> Result<IdentityRow> {
            let log_ratio = (gm.word_measure(pre) / gm.word_measure(word)).ln();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut res_worst, mut pass) = (0.0f64, true);
            for ext in extensions(model, word, left, right) {
                let x = WindowConfiguration::new(-n - left as i64, ext);
                let g = match cocycle_limit(model, phi, sigma, &x) {
                    Ok(g) => g,
                    Err(Error::OutsideGamma) => continue,
                    Err(e) => return Err(e),
                };
                lo = lo.min(g);
                hi = hi.max(g);
                let res = log_ratio - g;
                if res.abs() > res_worst.abs() {
                    res_worst = res;
                }
                pass &= res.abs() <= bound + tol;
            }
            Ok(IdentityRow {
                word: word_label(model, word),
                log_ratio,
                cocycle_min: lo,
                cocycle_max: hi,
                residual: res_worst,
                pass,
            })
        })
        .collect::<Result<_>>()?;
    let violations: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.word.clone()).collect();
    let (residual_min, residual_max) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(log_min(r)), b.max(log_max(r)))
    });
    Ok(CocycleIdentityReport {
        n,
        c1,
        c2,
        bound,
        tolerance: tol,
        residual_min,
        residual_max,
        pass: violations.is_empty(),
        rows,
        excluded,
        violations,
    })
}

fn log_min(r: &IdentityRow) -> f64 {
    r.log_ratio - r.cocycle_max
}

fn log_max(r: &IdentityRow) -> f64 {
    r.log_ratio - r.cocycle_min
}
