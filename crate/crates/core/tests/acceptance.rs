//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sft_gibbs::files::{parse_model_file, parse_potential_file, ModelFile};
use sft_gibbs::gibbs::{
    build_gibbs_measure, cylinder_measure, gibbs_ratio, gibbs_word_len, sample_trajectory, verify_gibbs_bounds,
    GibbsMeasureModel,
};
use sft_gibbs::mixing::{birkhoff_standard_error, decay_table, fitted_log_slope, max_single_symbol_gap, subdominant_ratio};
use sft_gibbs::perm::{gamma_p_formula_check, FiniteSupportPermutation, WindowConfiguration};
use sft_gibbs::potential::{check_homology, FiniteRangePotential, DEFAULT_ALPHA};
use sft_gibbs::quasi_inv::{
    cocycle_bound, cocycle_g, cocycle_limit, m_of, rn_ratio, verify_cocycle_identity, verify_quasi_invariance,
};
use sft_gibbs::sft::{check_mixing, compute_k0, Cylinder, SftModel, Symbol};

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn load(name: &str) -> ModelFile {
    parse_model_file(&data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn phi_of(f: &ModelFile) -> FiniteRangePotential {
    f.potential.clone().unwrap_or_else(|| FiniteRangePotential::zero(&f.model))
}

/// Models with their own Gibbs measure (the corrupted fixture is excluded).
const SHIPPED: [&str; 6] = [
    "golden_mean.toml",
    "full_shift.toml",
    "ising_full_shift.toml",
    "golden_mean_range3.toml",
    "three_symbol.toml",
    "homology/model.toml",
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn admissible(model: &SftModel, w: &[Symbol]) -> bool {
    w.windows(2).all(|p| model.allowed(p[0], p[1]))
}

fn all_words(n: usize, len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Markov measure of a word, from the chain's matrices directly.
fn markov_measure(gm: &GibbsMeasureModel, w: &[Symbol]) -> f64 {
    let mut v = gm.stationary[w[0]];
    for p in w.windows(2) {
        v *= gm.stochastic[p[0]][p[1]];
    }
    v
}

// 1 -------------------------------------------------------------------------

fn exponent_by_integer_powers(model: &SftModel) -> Option<usize> {
    let n = model.alphabet_size();
    let a: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| model.allowed(i, j) as u64).collect()).collect();
    let mut p = a.clone();
    for m in 1..=(n * n) {
        if p.iter().flatten().all(|&x| x > 0) {
            return Some(m);
        }
        p = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|t| p[i][t].min(1) * a[t][j]).sum()).collect())
            .collect();
    }
    None
}

/// Is every `C_k(a,b,c,d)` (`x_0 = a, x_1 = b, x_k = c, x_{k+1} = d`, with
/// `(a,b), (c,d)` allowed) realized by some admissible word?
fn all_c_k_nonempty(model: &SftModel, k: usize) -> bool {
    let n = model.alphabet_size();
    let words: Vec<Vec<Symbol>> = all_words(n, k + 2).into_iter().filter(|w| admissible(model, w)).collect();
    let mut seen = BTreeSet::new();
    for w in &words {
        seen.insert((w[0], w[1], w[k], w[k + 1]));
    }
    let q: Vec<(Symbol, Symbol)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| model.allowed(a, b)).collect();
    q.iter().all(|&(a, b)| q.iter().all(|&(c, d)| seen.contains(&(a, b, c, d))))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (name, m, k0) in [("golden_mean.toml", 2, 3), ("full_shift.toml", 1, 2)] {
        let model = load(name).model;
        let report = check_mixing(&model);
        ensure(report.is_mixing && report.exponent == Some(m), || format!("{name}: {report:?}"))?;
        ensure(exponent_by_integer_powers(&model) == Some(m), || format!("{name}: integer powers disagree"))?;
        let got = compute_k0(&model).map_err(|e| e.to_string())?;
        ensure(got == k0, || format!("{name}: k0 = {got}, expected {k0}"))?;
        for k in k0..=k0 + 5 {
            ensure(all_c_k_nonempty(&model, k), || format!("{name}: some C_{k} empty"))?;
        }
        ensure(!all_c_k_nonempty(&model, k0 - 1), || format!("{name}: every C_{} nonempty", k0 - 1))?;
        notes.push(format!("{name}: M={m} k0={k0}"));
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(notes.join(", "))
}

// 2 -------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let model = load("golden_mean.toml").model;
    let (p, k) = (5i64, 3i64);
    let sigma = FiniteSupportPermutation::swap_involution(p, k).map_err(|e| e.to_string())?;
    let len = (p + k + 2) as usize;
    let mut windows = 0;
    let mut disagreements = 0;
    for w in all_words(2, len).into_iter().filter(|w| admissible(&model, w)) {
        windows += 1;
        let x = WindowConfiguration::new(0, w.clone());
        let check = gamma_p_formula_check(&model, p, k, &x).map_err(|e| e.to_string())?;
        // independent direct membership: permute by hand, test admissibility
        let image: Vec<Symbol> = (0..len as i64).map(|j| w[sigma.apply(j) as usize]).collect();
        let direct = admissible(&model, &image);
        if check.direct != check.formula || check.direct != direct {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements over {windows} windows"))?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("{windows} windows, 0 disagreements"))
}

// 3 -------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let golden = load("golden_mean.toml");
    let gm = build_gibbs_measure(&golden.model, &phi_of(&golden)).map_err(|e| e.to_string())?;
    let sqrt5 = 5f64.sqrt();
    let p_expect = ((1.0 + sqrt5) / 2.0).ln();
    ensure((gm.pressure - p_expect).abs() <= 1e-10, || format!("pressure {}", gm.pressure))?;
    let pi = [(5.0 + sqrt5) / 10.0, (5.0 - sqrt5) / 10.0];
    for i in 0..2 {
        ensure((gm.stationary[i] - pi[i]).abs() <= 1e-10, || format!("pi = {:?}", gm.stationary))?;
    }
    let mut worst: f64 = 0.0;
    for name in SHIPPED {
        let f = load(name);
        let phi = phi_of(&f);
        let gm = build_gibbs_measure(&f.model, &phi).map_err(|e| e.to_string())?;
        // pressure against an independent dense eigen-solver
        let states = &gm.recoding().model;
        let n = states.alphabet_size();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if states.allowed(i, j) {
                gm.recoding().potential.value(&[i, j]).unwrap().exp()
            } else {
                0.0
            }
        });
        let lambda = m.complex_eigenvalues().iter().map(|z| z.re).fold(f64::MIN, f64::max);
        ensure((gm.pressure - lambda.ln()).abs() <= 1e-10, || format!("{name}: pressure {} vs {}", gm.pressure, lambda.ln()))?;
        // entropy from the chain; ∫φ dμ from cylinder masses of r-words
        let h: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| gm.stochastic[i][j] > 0.0)
            .map(|(i, j)| -gm.stationary[i] * gm.stochastic[i][j] * gm.stochastic[i][j].ln())
            .sum();
        let mean_phi: f64 = f
            .model
            .admissible_words(phi.range())
            .iter()
            .map(|w| phi.value(w).unwrap() * cylinder_measure(&gm, &Cylinder::word(0, w)).value)
            .sum();
        let err = (h - (gm.pressure - mean_phi)).abs();
        ensure(err <= 1e-9, || format!("{name}: entropy identity off by {err:e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("golden mean p, pi within 1e-10; entropy identity worst {worst:.1e} over {} models", SHIPPED.len()))
}

// 4 -------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let tol = 1e-9;
    for name in SHIPPED {
        let f = load(name);
        let phi = phi_of(&f);
        let gm = build_gibbs_measure(&f.model, &phi).map_err(|e| e.to_string())?;
        let b = verify_gibbs_bounds(&gm, &phi, 10).map_err(|e| e.to_string())?;
        ensure(0.0 < b.c1_hat && b.c1_hat <= b.c2_hat, || format!("{name}: c1 = {}, c2 = {}", b.c1_hat, b.c2_hat))?;
        let n = f.model.alphabet_size();
        let r = phi.range();
        for _ in 0..1000 {
            // random admissible word of length ≤ 20 by rejection
            let m = rng.random_range(0..=20 - r.max(2) + 1);
            let len = gibbs_word_len(m, r);
            let w = loop {
                let w: Vec<Symbol> = (0..len).map(|_| rng.random_range(0..n)).collect();
                if admissible(&f.model, &w) {
                    break w;
                }
            };
            // a_m from the measure, pressure and a direct Boltzmann sum
            let mu = cylinder_measure(&gm, &Cylinder::word(0, &w[..=m])).value;
            let boltz: f64 = (0..m).map(|j| phi.value(&w[j..j + r]).unwrap()).sum();
            let a = mu * (gm.pressure * m as f64 - boltz).exp();
            ensure(a >= b.c1_hat * (1.0 - tol) && a <= b.c2_hat * (1.0 + tol), || {
                format!("{name}: a_{m}({w:?}) = {a} outside [{}, {}]", b.c1_hat, b.c2_hat)
            })?;
        }
    }
    let full = load("full_shift.toml");
    let phi = phi_of(&full);
    let gm = build_gibbs_measure(&full.model, &phi).map_err(|e| e.to_string())?;
    let b = verify_gibbs_bounds(&gm, &phi, 10).map_err(|e| e.to_string())?;
    ensure(b.c1_hat == 0.5 && b.c2_hat == 0.5, || format!("full shift c1 = {}, c2 = {}", b.c1_hat, b.c2_hat))?;
    for m in 0..=10 {
        for w in full.model.admissible_words(m + 1) {
            let a = gibbs_ratio(&gm, &phi, &w, m);
            ensure(a == 0.5, || format!("full shift a_{m}({w:?}) = {a}"))?;
        }
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("{} models, 1000 random words each; full shift a_m = 1/2 exactly", SHIPPED.len()))
}

// 5 -------------------------------------------------------------------------

/// `Σ_{q=−N}^{N−1} (φ(S^q T_τ x) − φ(S^q x))` with `T_τ x` built in full.
fn oracle_g(phi: &FiniteRangePotential, tau: &FiniteSupportPermutation, x: &WindowConfiguration, n: i64) -> f64 {
    let r = phi.range();
    let tx = WindowConfiguration::new(x.offset, (x.lo()..=x.hi()).map(|j| x.get(tau.apply(j)).unwrap()).collect());
    (-n..n)
        .map(|q| phi.value(tx.slice(q, r).unwrap()).unwrap() - phi.value(x.slice(q, r).unwrap()).unwrap())
        .sum()
}

fn random_gamma_window(model: &SftModel, tau: &FiniteSupportPermutation, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> WindowConfiguration {
    let n = model.alphabet_size();
    loop {
        let mut w = vec![rng.random_range(0..n)];
        while w.len() < (hi - lo + 1) as usize {
            let last = *w.last().unwrap();
            let next: Vec<Symbol> = (0..n).filter(|&j| model.allowed(last, j)).collect();
            w.push(next[rng.random_range(0..next.len())]);
        }
        let x = WindowConfiguration::new(lo, w);
        let image: Vec<Symbol> = (lo..=hi).map(|j| x.get(tau.apply(j)).unwrap()).collect();
        if admissible(model, &image) {
            return x;
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let swap = |p, k| FiniteSupportPermutation::swap_involution(p, k).unwrap();
    let triples = [
        ("ising_full_shift.toml", FiniteSupportPermutation::transposition(1, 2)),
        ("ising_full_shift.toml", swap(5, 2)),
        ("golden_mean_range3.toml", swap(3, 1)),
        ("golden_mean.toml", swap(5, 2)),
        ("three_symbol.toml", FiniteSupportPermutation::transposition(-2, 3)),
        ("homology/model.toml", swap(4, 2)),
    ];
    let mut checks = 0;
    for (name, tau) in &triples {
        let f = load(name);
        let phi = phi_of(&f);
        let r = phi.range() as i64;
        let m = m_of(tau);
        let bound = cocycle_bound(&f.model, &phi, tau, f.alpha).map_err(|e| e.to_string())?.c;
        let n_hi = m + r + 5;
        for _ in 0..100 {
            let x = random_gamma_window(&f.model, tau, -n_hi - r, n_hi + r, &mut rng);
            let limit = cocycle_limit(&f.model, &phi, tau, &x).map_err(|e| e.to_string())?;
            for n in m..=n_hi {
                let g = cocycle_g(&f.model, &phi, tau, &x, n).map_err(|e| e.to_string())?.value;
                let o = oracle_g(&phi, tau, &x, n);
                ensure((g - o).abs() <= 1e-12, || format!("{name}: G_{n} = {g}, oracle {o}"))?;
                ensure(g.abs() <= bound + 1e-12, || format!("{name}: |G_{n}| = {} > C = {bound}", g.abs()))?;
                if n >= m + r {
                    ensure(g == limit, || format!("{name}: G_{n} = {g} differs from limit {limit}"))?;
                }
                checks += 1;
            }
        }
    }
    // range-1 potentials: cocycle identically zero, unit ratios on the full shift
    let full = load("full_shift.toml").model;
    let phi = FiniteRangePotential::from_fn(&full, 1, |w| if w[0] == 1 { 0.8 } else { -0.3 }).unwrap();
    let gm = build_gibbs_measure(&full, &phi).map_err(|e| e.to_string())?;
    for tau in [swap(5, 2), swap(3, 2), FiniteSupportPermutation::transposition(-4, 1)] {
        let m = m_of(&tau);
        let bound = cocycle_bound(&full, &phi, &tau, DEFAULT_ALPHA).map_err(|e| e.to_string())?.c;
        ensure(bound == 0.0, || format!("range-1 bound {bound}"))?;
        for _ in 0..100 {
            let x = random_gamma_window(&full, &tau, -m - 1, m + 1, &mut rng);
            for n in m..=m + 1 {
                let g = cocycle_g(&full, &phi, &tau, &x, n).map_err(|e| e.to_string())?.value;
                ensure(g == 0.0, || format!("range-1 G_{n} = {g}"))?;
            }
            let ratio = rn_ratio(&gm, &tau, &Cylinder::word(x.offset, &x.symbols)).map_err(|e| e.to_string())?;
            ensure((ratio - 1.0).abs() <= 1e-12, || format!("range-1 ratio {ratio}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} checks, 0 violations"))
}

// 6 -------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let sigma = FiniteSupportPermutation::swap_involution(5, 2).unwrap();
    let n = 8i64;
    let mut notes = Vec::new();
    for name in ["golden_mean.toml", "ising_full_shift.toml"] {
        let f = load(name);
        let phi = phi_of(&f);
        let gm = build_gibbs_measure(&f.model, &phi).map_err(|e| e.to_string())?;
        let rep = verify_quasi_invariance(&gm, &phi, &sigma, n, f.alpha).map_err(|e| e.to_string())?;
        ensure(rep.pass && rep.violations.is_empty(), || format!("{name}: {} violations", rep.violations.len()))?;
        let (c1, c2, c) = (gm.gibbs_constants.c1, gm.gibbs_constants.c2, rep.cocycle_bound.c);
        let (alpha, beta) = (c1 / c2 * (-c).exp(), c2 / c1 * c.exp());
        // independent sweep: every admissible word on [−N, N] inside Γ_σ
        let mut count = 0;
        for w in f.model.admissible_words((2 * n + 1) as usize) {
            let pre: Vec<Symbol> = (-n..=n).map(|j| w[(sigma.apply(j) + n) as usize]).collect();
            if !admissible(&f.model, &pre) {
                continue;
            }
            count += 1;
            let ratio = markov_measure(&gm, &pre) / markov_measure(&gm, &w);
            ensure(ratio >= alpha * (1.0 - 1e-12) && ratio <= beta * (1.0 + 1e-12), || {
                format!("{name}: ratio {ratio} outside [{alpha}, {beta}] for {w:?}")
            })?;
        }
        ensure(count == rep.rows.len(), || format!("{name}: {count} cylinders vs {} rows", rep.rows.len()))?;
        notes.push(format!("{name}: {count} cylinders in [{alpha:.4}, {beta:.4}]"));
    }
    within_time(start, Duration::from_secs(30))?;
    Ok(notes.join("; "))
}

// 7 -------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let f = load("ising_full_shift.toml");
    let phi = phi_of(&f);
    let gm = build_gibbs_measure(&f.model, &phi).map_err(|e| e.to_string())?;
    let sigma = FiniteSupportPermutation::transposition(1, 2);
    let p = &gm.stochastic;
    let mut worst: f64 = 0.0;
    for w in all_words(2, 4) {
        let closed = (p[w[0]][w[2]] * p[w[2]][w[1]] * p[w[1]][w[3]] / (p[w[0]][w[1]] * p[w[1]][w[2]] * p[w[2]][w[3]])).ln();
        let finite_sum: f64 = (0..3).map(|q| {
            let tx = [w[0], w[2], w[1], w[3]];
            (tx[q] * tx[q + 1]) as f64 - (w[q] * w[q + 1]) as f64
        }).sum();
        let g = cocycle_limit(&f.model, &phi, &sigma, &WindowConfiguration::new(0, w.clone())).map_err(|e| e.to_string())?;
        let log_ratio = rn_ratio(&gm, &sigma, &Cylinder::word(0, &w)).map_err(|e| e.to_string())?.ln();
        ensure(g == finite_sum, || format!("{w:?}: cocycle {g} vs hand sum {finite_sum}"))?;
        for (label, v) in [("closed form", closed), ("rn_ratio", log_ratio)] {
            let e = (v - g).abs();
            ensure(e <= 1e-9, || format!("{w:?}: {label} log ratio {v} vs cocycle {g}"))?;
            worst = worst.max(e);
        }
    }
    let golden = load("golden_mean.toml");
    let gphi = phi_of(&golden);
    let ggm = build_gibbs_measure(&golden.model, &gphi).map_err(|e| e.to_string())?;
    let s52 = FiniteSupportPermutation::swap_involution(5, 2).unwrap();
    let rep = verify_cocycle_identity(&ggm, &gphi, &s52, 8).map_err(|e| e.to_string())?;
    let bound = (ggm.gibbs_constants.c2 / ggm.gibbs_constants.c1).ln();
    ensure(rep.pass, || format!("golden mean: {} violations", rep.violations.len()))?;
    ensure(
        rep.residual_min.abs() <= bound + 1e-9 && rep.residual_max.abs() <= bound + 1e-9,
        || format!("golden mean residual range [{}, {}] vs log(c2/c1) = {bound}", rep.residual_min, rep.residual_max),
    )?;
    Ok(format!(
        "16 words worst {worst:.1e}; golden mean {} cylinders, residual in [{:.1e}, {:.1e}] vs log(c2/c1) = {bound:.3}",
        rep.rows.len(),
        rep.residual_min,
        rep.residual_max
    ))
}

// 8 -------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let golden = load("golden_mean.toml");
    let gm = build_gibbs_measure(&golden.model, &phi_of(&golden)).map_err(|e| e.to_string())?;
    let log_rho = ((3.0 - 5f64.sqrt()) / 2.0).ln();
    let e = Cylinder::whole().with(0, 1);
    let f = Cylinder::whole().with(1, 1);
    let rows: Vec<_> = decay_table(&gm, &e, &f, 20).map_err(|e| e.to_string())?.into_iter().filter(|r| r.n >= 2).collect();
    let slope = fitted_log_slope(&rows, 1e-13).ok_or("too few points for a fit")?;
    ensure(slope <= log_rho + 1e-6, || format!("slope {slope} > log rho {log_rho}"))?;
    for name in SHIPPED {
        let f = load(name);
        let gm = build_gibbs_measure(&f.model, &phi_of(&f)).map_err(|e| e.to_string())?;
        let mut prev = f64::INFINITY;
        for n in 0..=60 {
            let g = max_single_symbol_gap(&gm, n);
            ensure(g <= prev + 1e-12, || format!("{name}: gap rises at n = {n}"))?;
            prev = g;
        }
        ensure(prev < 1e-9, || format!("{name}: gap {prev:e} at n = 60"))?;
    }
    let full = load("full_shift.toml");
    let gm = build_gibbs_measure(&full.model, &phi_of(&full)).map_err(|e| e.to_string())?;
    for n in 0..=20 {
        ensure(max_single_symbol_gap(&gm, n) == 0.0, || format!("full shift gap nonzero at n = {n}"))?;
    }
    Ok(format!("slope {slope:.6} <= log rho {log_rho:.6}; below 1e-9 by n = 60 on {} models; full shift exactly 0", SHIPPED.len()))
}

// 9 -------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    let q = 100_000;
    let mut worst_z: f64 = 0.0;
    let mut checked = 0;
    for name in SHIPPED {
        let f = load(name);
        let gm = build_gibbs_measure(&f.model, &phi_of(&f)).map_err(|e| e.to_string())?;
        let rho = subdominant_ratio(&gm).map_err(|e| e.to_string())?;
        let traj = sample_trajectory(&gm, q + 1, 9);
        let again = sample_trajectory(&gm, q + 1, 9);
        ensure(traj == again, || format!("{name}: rerun differs"))?;
        ensure(admissible(&f.model, &traj.symbols), || format!("{name}: inadmissible trajectory"))?;
        let k = f.model.alphabet_size();
        let mut words: Vec<Vec<Symbol>> = (0..k).map(|s| vec![s]).collect();
        words.extend(f.model.admissible_words(2));
        for w in words {
            let hits = (0..q).filter(|&t| traj.symbols[t..t + w.len()] == w[..]).count();
            let freq = hits as f64 / q as f64;
            let exact = cylinder_measure(&gm, &Cylinder::word(0, &w)).value;
            let se = birkhoff_standard_error(exact, q, rho);
            let z = (freq - exact).abs() / se;
            ensure(z <= 5.0, || format!("{name}: {w:?} frequency {freq} vs {exact} ({z:.2} standard errors)"))?;
            worst_z = worst_z.max(z);
            checked += 1;
        }
    }
    // byte-identical reports through the command-line tool
    let bin = env!("CARGO_BIN_EXE_sft-gibbs");
    let run = || {
        Command::new(bin)
            .args(["sample", data("golden_mean.toml").to_str().unwrap(), "--length", "2000", "--seed", "17"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    ensure(a.status.success() && a.stdout == b.stdout, || "sample reports differ between runs".into())?;
    Ok(format!("{checked} cylinders within 5 standard errors (worst {worst_z:.2}); reruns identical"))
}

// 10 ------------------------------------------------------------------------

fn criterion_10() -> Outcome {
    let f = load("homology/model.toml");
    let phi = phi_of(&f);
    let (psi, _) = parse_potential_file(&data("homology/psi.toml"), &f.model).map_err(|e| e.to_string())?;
    let (u, _) = parse_potential_file(&data("homology/u.toml"), &f.model).map_err(|e| e.to_string())?;
    ensure(check_homology(&f.model, &phi, &psi, &u).map_err(|e| e.to_string())?, || "fixture is not cohomologous".into())?;
    // independent restatement on pairs: ψ(ab) = φ(ab) + u(a) − u(b)
    for w in f.model.admissible_words(2) {
        let rhs = phi.value(&w).unwrap() + u.value(&w[..1]).unwrap() - u.value(&w[1..]).unwrap();
        ensure((psi.value(&w).unwrap() - rhs).abs() < 1e-15, || format!("psi mismatch at {w:?}"))?;
    }
    let gm_phi = build_gibbs_measure(&f.model, &phi).map_err(|e| e.to_string())?;
    let gm_psi = build_gibbs_measure(&f.model, &psi).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for len in 1..=6 {
        for w in f.model.admissible_words(len) {
            let c = Cylinder::word(0, &w);
            let d = (cylinder_measure(&gm_phi, &c).value - cylinder_measure(&gm_psi, &c).value).abs();
            ensure(d <= 1e-9, || format!("{w:?}: measures differ by {d:e}"))?;
            worst = worst.max(d);
            count += 1;
        }
    }
    Ok(format!("{count} cylinders up to length 6, worst difference {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("mixing and constants", criterion_1),
        ("gamma formula", criterion_2),
        ("transfer-matrix numerics", criterion_3),
        ("Gibbs inequality", criterion_4),
        ("cocycle stabilization and bound", criterion_5),
        ("quasi-invariance sandwich", criterion_6),
        ("cocycle identity", criterion_7),
        ("factorization decay", criterion_8),
        ("Monte Carlo consistency", criterion_9),
        ("homology invariance", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.2}s) {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.2}s) {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
