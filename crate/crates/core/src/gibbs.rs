//! Gibbs measures of finite-range potentials via the transfer matrix.
//!
//! For a potential of range ≤ 2 the transfer matrix is
//! `M[i][j] = Λ[i][j] e^{φ(ij)}`. With `M h = λ h` and `ℓ M = λ ℓ` the Gibbs
//! measure is the Markov measure with
//!
//! ```text
//! P[i][j] = M[i][j] h[j] / (λ h[i]),     π[i] = ℓ[i] h[i] / ⟨ℓ, h⟩,
//! ```
//!
//! and pressure `p = log λ`. Longer ranges are first recoded on
//! `(r−1)`-blocks, so the chain runs over blocks and original-symbol
//! constraints are lifted to block constraints.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::perm::WindowConfiguration;
use crate::potential::{two_block_recode, BlockRecoding, FiniteRangePotential};
use crate::sft::{check_mixing, Cylinder, SftModel, Symbol, SymbolSet};

/// Default longest word length (minus one) swept when estimating `c1`, `c2`.
pub const DEFAULT_M_MAX: usize = 10;

/// Tolerance used when re-checking Gibbs constants on other words. This is
/// floating-point slack only; the constants themselves are not inflated.
pub const BOUND_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GibbsConstants {
    pub c1: f64,
    pub c2: f64,
    pub m_max: usize,
}

/// The Gibbs measure `μ_φ` of a finite-range potential, as a Markov chain.
#[derive(Debug, Clone)]
pub struct GibbsMeasureModel {
    base: SftModel,
    potential: FiniteRangePotential,
    recoding: BlockRecoding,
    block_index: HashMap<Vec<Symbol>, usize>,
    pub pressure: f64,
    pub eigenvalue: f64,
    pub right_vec: Vec<f64>,
    pub left_vec: Vec<f64>,
    pub stochastic: Matrix,
    pub stationary: Vec<f64>,
    pub gibbs_constants: GibbsConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderMeasureResult {
    pub value: f64,
    pub exact: bool,
}

/// Builds `μ_φ` with the default sweep length for the Gibbs constants.
pub fn build_gibbs_measure(model: &SftModel, phi: &FiniteRangePotential) -> Result<GibbsMeasureModel> {
    build_gibbs_measure_with(model, phi, DEFAULT_M_MAX)
}

pub fn build_gibbs_measure_with(
    model: &SftModel,
    phi: &FiniteRangePotential,
    m_max: usize,
) -> Result<GibbsMeasureModel> {
    if !check_mixing(model).is_mixing {
        return Err(Error::NotMixing);
    }
    let recoding = two_block_recode(model, phi)?;
    let states = &recoding.model;
    let n = states.alphabet_size();
    let edge_weight = |i: usize, j: usize| -> f64 {
        if states.allowed(i, j) {
            recoding
                .potential
                .value(&[i, j])
                .expect("edge is admissible")
                .exp()
        } else {
            0.0
        }
    };
    let transfer: Matrix = (0..n)
        .map(|i| (0..n).map(|j| edge_weight(i, j)).collect())
        .collect();
    let (lambda, right) = linalg::dominant_eigenpair(&transfer, linalg::EIGEN_TOL, linalg::MAX_ITER)?;
    let (_, left) = linalg::dominant_eigenpair(
        &linalg::transpose(&transfer),
        linalg::EIGEN_TOL,
        linalg::MAX_ITER,
    )?;
    let mut stochastic: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| transfer[i][j] * right[j] / (lambda * right[i]))
                .collect()
        })
        .collect();
    for row in &mut stochastic {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= s);
    }
    let z: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    let stationary = left.iter().zip(&right).map(|(a, b)| a * b / z).collect();

    let block_index = recoding
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();
    let mut gm = GibbsMeasureModel {
        base: model.clone(),
        potential: phi.clone(),
        recoding,
        block_index,
        pressure: lambda.ln(),
        eigenvalue: lambda,
        right_vec: right,
        left_vec: left,
        stochastic,
        stationary,
        gibbs_constants: GibbsConstants {
            c1: f64::NAN,
            c2: f64::NAN,
            m_max,
        },
    };
    let bounds = verify_gibbs_bounds(&gm, phi, m_max)?;
    gm.gibbs_constants = GibbsConstants {
        c1: bounds.c1_hat,
        c2: bounds.c2_hat,
        m_max,
    };
    Ok(gm)
}

impl GibbsMeasureModel {
    /// The subshift the measure lives on (original alphabet).
    pub fn base(&self) -> &SftModel {
        &self.base
    }

    pub fn potential(&self) -> &FiniteRangePotential {
        &self.potential
    }

    pub fn recoding(&self) -> &BlockRecoding {
        &self.recoding
    }

    /// Number of chain states (blocks).
    pub fn state_count(&self) -> usize {
        self.stationary.len()
    }

    /// Replaces the Markov chain while keeping pressure and Gibbs constants.
    ///
    /// Produces measures that are *not* the Gibbs measure of the stored
    /// potential; used to exercise the failure paths of the checks.
    pub fn with_perturbed_chain(&self, stochastic: Matrix, stationary: Option<Vec<f64>>) -> Result<Self> {
        let n = self.state_count();
        if stochastic.len() != n || stochastic.iter().any(|r| r.len() != n) {
            return Err(Error::BadShape(format!("stochastic matrix must be {n}x{n}")));
        }
        for (i, row) in stochastic.iter().enumerate() {
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::BadParameters(format!("row {i} has entries outside [0, 1]")));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::BadParameters(format!("row {i} does not sum to 1")));
            }
            for (j, &x) in row.iter().enumerate() {
                if x > 0.0 && !self.recoding.model.allowed(i, j) {
                    return Err(Error::BadParameters(format!(
                        "transition {i} -> {j} is forbidden but has mass {x}"
                    )));
                }
            }
        }
        let stationary = match stationary {
            Some(pi) => {
                if pi.len() != n || (pi.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return Err(Error::BadParameters("stationary vector must be a probability vector".into()));
                }
                pi
            }
            None => linalg::stationary_of(&stochastic, 1e-15, linalg::MAX_ITER)?,
        };
        let mut out = self.clone();
        out.stochastic = stochastic;
        out.stationary = stationary;
        Ok(out)
    }

    /// Measure of an original-alphabet word placed anywhere (shift invariance).
    pub fn word_measure(&self, word: &[Symbol]) -> f64 {
        let s = self.recoding.block_len;
        if word.is_empty() {
            return 1.0;
        }
        if word.len() < s {
            return cylinder_measure(self, &Cylinder::word(0, word)).value;
        }
        let mut states = Vec::with_capacity(word.len() + 1 - s);
        for w in word.windows(s) {
            match self.block_index.get(w) {
                Some(&i) => states.push(i),
                None => return 0.0,
            }
        }
        self.state_word_measure(&states)
    }

    fn state_word_measure(&self, states: &[usize]) -> f64 {
        let mut v = self.stationary[states[0]];
        for w in states.windows(2) {
            v *= self.stochastic[w[0]][w[1]];
        }
        v
    }

    /// `∫ φ dμ`.
    pub fn mean_potential(&self) -> f64 {
        let n = self.state_count();
        let phi = &self.recoding.potential;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let pij = self.stochastic[i][j];
                if pij > 0.0 {
                    total += self.stationary[i] * pij * phi.value(&[i, j]).unwrap_or(0.0);
                }
            }
        }
        total
    }

    /// Serializable summary.
    pub fn summary(&self) -> GibbsSummary {
        GibbsSummary {
            states: self.recoding.model.names().to_vec(),
            block_len: self.recoding.block_len,
            pressure: self.pressure,
            eigenvalue: self.eigenvalue,
            stationary: self.stationary.clone(),
            stochastic: self.stochastic.clone(),
            c1: self.gibbs_constants.c1,
            c2: self.gibbs_constants.c2,
            m_max: self.gibbs_constants.m_max,
            entropy: entropy(self),
            mean_potential: self.mean_potential(),
            pressure_convention: "p = log of the dominant transfer-matrix eigenvalue",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsSummary {
    pub states: Vec<String>,
    pub block_len: usize,
    pub pressure: f64,
    pub eigenvalue: f64,
    pub stationary: Vec<f64>,
    pub stochastic: Matrix,
    pub c1: f64,
    pub c2: f64,
    pub m_max: usize,
    pub entropy: f64,
    pub mean_potential: f64,
    pub pressure_convention: &'static str,
}

/// Exact measure of a cylinder (original alphabet).
///
/// Constraints are lifted to chain states and the row vector `π` is pushed
/// through powers of `P` across the gaps between constrained positions.
pub fn cylinder_measure(gm: &GibbsMeasureModel, cylinder: &Cylinder) -> CylinderMeasureResult {
    let exact = |value: f64| CylinderMeasureResult { value, exact: true };
    if cylinder.is_whole() {
        return exact(1.0);
    }
    if cylinder.has_empty_set() {
        return exact(0.0);
    }
    if cylinder
        .iter()
        .any(|(_, set)| set.iter().any(|&s| s >= gm.base.alphabet_size()))
    {
        return exact(0.0);
    }
    // contiguous word: direct product
    let (lo, hi) = cylinder.span().expect("nonempty");
    if (hi - lo + 1) as usize == cylinder.len() && cylinder.iter().all(|(_, s)| s.len() == 1) {
        let word: Vec<Symbol> = cylinder
            .iter()
            .map(|(_, s)| *s.iter().next().unwrap())
            .collect();
        if word.len() >= gm.recoding.block_len {
            return exact(gm.word_measure(&word));
        }
    }
    let lifted: Vec<(i64, SymbolSet)> = cylinder
        .iter()
        .map(|(p, set)| (p, gm.recoding.lift_set(set)))
        .collect();
    let mask = |v: &mut [f64], set: &SymbolSet| {
        for (i, x) in v.iter_mut().enumerate() {
            if !set.contains(&i) {
                *x = 0.0;
            }
        }
    };
    let mut v = gm.stationary.clone();
    mask(&mut v, &lifted[0].1);
    let mut prev = lifted[0].0;
    for (pos, set) in &lifted[1..] {
        for _ in prev..*pos {
            v = linalg::vec_mat(&v, &gm.stochastic);
        }
        mask(&mut v, set);
        prev = *pos;
    }
    exact(v.iter().sum::<f64>().clamp(0.0, 1.0))
}

/// Empirical Gibbs constants from a sweep over words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsBounds {
    pub c1_hat: f64,
    pub c2_hat: f64,
    /// Word (original symbols) attaining `c1_hat`, with its `m`.
    pub worst_low: (Vec<Symbol>, usize),
    pub worst_high: (Vec<Symbol>, usize),
    pub words_checked: usize,
}

/// `a_m(x) = μ(x_0 … x_m) / exp(−p m + Σ_{j<m} φ(S^j x))` for a point whose
/// coordinates start with `word`. The word must reach coordinate
/// `max(m, m + r − 2)`.
pub fn gibbs_ratio(gm: &GibbsMeasureModel, phi: &FiniteRangePotential, word: &[Symbol], m: usize) -> f64 {
    let mu = gm.word_measure(&word[..=m]);
    let boltzmann: f64 = (0..m)
        .map(|j| phi.value(&word[j..]).expect("word long enough and admissible"))
        .sum();
    // multiplicative form keeps dyadic cases (uniform Bernoulli) exact
    mu * gm.eigenvalue.powi(m as i32) * (-boltzmann).exp()
}

/// Length of the word needed to evaluate `a_m` for a range-`r` potential.
pub fn gibbs_word_len(m: usize, r: usize) -> usize {
    (m + 1).max(m + r.max(1) - 1)
}

/// Sweeps `a_m(x)` over every admissible word with `m ≤ m_max`.
pub fn verify_gibbs_bounds(
    gm: &GibbsMeasureModel,
    phi: &FiniteRangePotential,
    m_max: usize,
) -> Result<GibbsBounds> {
    if m_max < 1 {
        return Err(Error::BadParameters("m_max must be at least 1".into()));
    }
    let model = &gm.base;
    let mut out = GibbsBounds {
        c1_hat: f64::INFINITY,
        c2_hat: f64::NEG_INFINITY,
        worst_low: (Vec::new(), 0),
        worst_high: (Vec::new(), 0),
        words_checked: 0,
    };
    for m in 0..=m_max {
        for word in model.admissible_words(gibbs_word_len(m, phi.range())) {
            let a = gibbs_ratio(gm, phi, &word, m);
            out.words_checked += 1;
            if a < out.c1_hat {
                out.c1_hat = a;
                out.worst_low = (word.clone(), m);
            }
            if a > out.c2_hat {
                out.c2_hat = a;
                out.worst_high = (word, m);
            }
        }
    }
    if !(out.c1_hat > 0.0) {
        return Err(Error::BadParameters(format!(
            "Gibbs ratio lower bound is not positive: {}",
            out.c1_hat
        )));
    }
    Ok(out)
}

/// Re-check of the Gibbs constants on random words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomWordCheck {
    pub checked: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub violations: usize,
}

/// Evaluates `a_m` on `count` random admissible words of length at most
/// `max_len` and counts those outside `[c1, c2]`. Words are drawn by a
/// uniform random walk on the transition graph.
pub fn check_random_words(
    gm: &GibbsMeasureModel,
    phi: &FiniteRangePotential,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<RandomWordCheck> {
    let extra = phi.range().max(2) - 2;
    if max_len < extra + 1 {
        return Err(Error::BadParameters(format!("max_len must be at least {}", extra + 1)));
    }
    let model = &gm.base;
    let n = model.alphabet_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c1, c2) = (gm.gibbs_constants.c1, gm.gibbs_constants.c2);
    let mut out = RandomWordCheck {
        checked: 0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        violations: 0,
    };
    for _ in 0..count {
        let m = rng.random_range(0..max_len - extra);
        let mut word = vec![rng.random_range(0..n)];
        while word.len() < gibbs_word_len(m, phi.range()) {
            let last = *word.last().unwrap();
            let next: Vec<Symbol> = (0..n).filter(|&j| model.allowed(last, j)).collect();
            word.push(next[rng.random_range(0..next.len())]);
        }
        let a = gibbs_ratio(gm, phi, &word, m);
        out.checked += 1;
        out.min_ratio = out.min_ratio.min(a);
        out.max_ratio = out.max_ratio.max(a);
        if a < c1 * (1.0 - BOUND_REL_TOL) || a > c2 * (1.0 + BOUND_REL_TOL) {
            out.violations += 1;
        }
    }
    Ok(out)
}

/// Draws `x_0 ~ π`, then successive states from the rows of `P`.
/// Identical `(seed, length)` give identical output.
pub fn sample_trajectory(gm: &GibbsMeasureModel, length: usize, seed: u64) -> WindowConfiguration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng, weights: &[f64]| -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                acc += w;
                last = i;
                if u < acc {
                    return i;
                }
            }
        }
        last
    };
    let mut symbols = Vec::with_capacity(length);
    if length == 0 {
        return WindowConfiguration::new(0, symbols);
    }
    let mut state = draw(&mut rng, &gm.stationary);
    symbols.push(gm.recoding.first_symbol(state));
    for _ in 1..length {
        state = draw(&mut rng, &gm.stochastic[state]);
        symbols.push(gm.recoding.first_symbol(state));
    }
    WindowConfiguration::new(0, symbols)
}

/// Entropy `−Σ_i π_i Σ_j P_ij log P_ij` of the chain.
pub fn entropy(gm: &GibbsMeasureModel) -> f64 {
    let mut h = 0.0;
    for (pi, row) in gm.stationary.iter().zip(&gm.stochastic) {
        for &p in row {
            if p > 0.0 {
                h -= pi * p * p.ln();
            }
        }
    }
    h
}
