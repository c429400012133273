//! Finite-range potentials, their variations, homology and higher-block recoding.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sft::{SftModel, Symbol, SymbolSet};

/// A locally constant potential `φ(x) = table[x_0 … x_{r−1}]`.
///
/// The table covers exactly the admissible words of length `r`. Values are
/// log-weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRangePotential {
    alphabet_size: usize,
    range: usize,
    table: BTreeMap<Vec<Symbol>, f64>,
}

impl FiniteRangePotential {
    pub fn from_fn(model: &SftModel, range: usize, f: impl Fn(&[Symbol]) -> f64) -> Result<Self> {
        if range == 0 {
            return Err(Error::RangeMismatch("range must be at least 1".into()));
        }
        let table = model
            .admissible_words(range)
            .into_iter()
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .collect();
        Ok(FiniteRangePotential {
            alphabet_size: model.alphabet_size(),
            range,
            table,
        })
    }

    /// Builds from an explicit table. Every admissible word must be present and
    /// nothing else may be.
    pub fn from_table(
        model: &SftModel,
        range: usize,
        table: BTreeMap<Vec<Symbol>, f64>,
    ) -> Result<Self> {
        if range == 0 {
            return Err(Error::RangeMismatch("range must be at least 1".into()));
        }
        for (w, v) in &table {
            if w.len() != range || !model.is_admissible(w) {
                return Err(Error::RangeMismatch(format!(
                    "word {w:?} is not an admissible word of length {range}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::RangeMismatch(format!("value for {w:?} is not finite")));
            }
        }
        for w in model.admissible_words(range) {
            if !table.contains_key(&w) {
                let names: Vec<&str> = w.iter().map(|&s| model.name(s)).collect();
                return Err(Error::IncompleteTable(names.join(" ")));
            }
        }
        Ok(FiniteRangePotential {
            alphabet_size: model.alphabet_size(),
            range,
            table,
        })
    }

    /// `φ ≡ 0`.
    pub fn zero(model: &SftModel) -> Self {
        Self::from_fn(model, 1, |_| 0.0).expect("range 1 is valid")
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn table(&self) -> &BTreeMap<Vec<Symbol>, f64> {
        &self.table
    }

    /// `φ` at a point whose coordinates `0..r` start `word`. `None` if
    /// `word` is shorter than the range or its prefix is inadmissible.
    #[inline]
    pub fn value(&self, word: &[Symbol]) -> Option<f64> {
        word.get(..self.range)
            .and_then(|w| self.table.get(w))
            .copied()
    }

    pub(crate) fn check_model(&self, model: &SftModel) -> Result<()> {
        if self.alphabet_size != model.alphabet_size() {
            return Err(Error::RangeMismatch(format!(
                "potential over {} symbols used with a model over {}",
                self.alphabet_size,
                model.alphabet_size()
            )));
        }
        if self.table.len() as u128 != model.count_words(self.range)
            || self.table.keys().any(|w| !model.is_admissible(w))
        {
            return Err(Error::RangeMismatch(
                "table does not cover the admissible words of the model".into(),
            ));
        }
        Ok(())
    }

    /// Same potential viewed with a longer range (value depends on the first `range` symbols).
    fn extended_value(&self, word: &[Symbol]) -> f64 {
        self.value(word).expect("word admissible and long enough")
    }
}

/// `var_k φ = sup{|φ(x) − φ(y)| : x_j = y_j for |j| ≤ k}`.
///
/// `φ` reads coordinates `0..r`, so only the agreement on `0..=min(k, r−1)`
/// matters; the shared past always exists because every symbol has a predecessor.
pub fn var_k(model: &SftModel, phi: &FiniteRangePotential, k: usize) -> Result<f64> {
    phi.check_model(model)?;
    let r = phi.range();
    if k + 1 >= r {
        return Ok(0.0);
    }
    let mut extremes: BTreeMap<&[Symbol], (f64, f64)> = BTreeMap::new();
    for (w, &v) in phi.table() {
        let e = extremes.entry(&w[..=k]).or_insert((v, v));
        e.0 = e.0.min(v);
        e.1 = e.1.max(v);
    }
    Ok(extremes
        .values()
        .map(|(lo, hi)| hi - lo)
        .fold(0.0, f64::max))
}

/// Constants `(b, α)` with `var_k φ ≤ b α^k` for every `k ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayEnvelope {
    pub b: f64,
    pub alpha: f64,
    /// `b / (1 − α)`, a bound on `Σ_k var_k φ`.
    pub tail_bound: f64,
}

pub const DEFAULT_ALPHA: f64 = 0.5;

/// Smallest `b` for the given `α`.
pub fn decay_envelope(
    model: &SftModel,
    phi: &FiniteRangePotential,
    alpha: f64,
) -> Result<DecayEnvelope> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha(alpha));
    }
    let mut b: f64 = 0.0;
    for k in 0..phi.range().saturating_sub(1) {
        b = b.max(var_k(model, phi, k)? / alpha.powi(k as i32));
    }
    Ok(DecayEnvelope {
        b,
        alpha,
        tail_bound: b / (1.0 - alpha),
    })
}

/// Checks `ψ = φ + u − u∘S` on every admissible word long enough to
/// determine all three functions.
pub fn check_homology(
    model: &SftModel,
    phi: &FiniteRangePotential,
    psi: &FiniteRangePotential,
    u: &FiniteRangePotential,
) -> Result<bool> {
    for f in [phi, psi, u] {
        f.check_model(model)?;
    }
    let len = phi.range().max(psi.range()).max(u.range() + 1);
    Ok(model.admissible_words(len).iter().all(|w| {
        let lhs = psi.extended_value(w);
        let rhs = phi.extended_value(w) + u.extended_value(w) - u.extended_value(&w[1..]);
        (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs()))
    }))
}

/// A subshift recoded on blocks of length `block_len`, with a range ≤ 2 potential.
///
/// State `i` of the recoded model is the block `blocks[i]`; `B → B′` is allowed
/// when the blocks overlap in `block_len − 1` symbols. A recoded word
/// `B_0 … B_{m−1}` corresponds to the original word `B_0` followed by the last
/// symbols of `B_1 … B_{m−1}`, and position `j` of the recoded sequence carries
/// the block starting at original position `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRecoding {
    pub model: SftModel,
    pub potential: FiniteRangePotential,
    pub blocks: Vec<Vec<Symbol>>,
    pub block_len: usize,
}

impl BlockRecoding {
    pub fn is_identity(&self) -> bool {
        self.block_len == 1
    }

    /// Maps a recoded word to the original word it encodes.
    pub fn block_map(&self, word: &[Symbol]) -> Vec<Symbol> {
        let Some((&first, rest)) = word.split_first() else {
            return Vec::new();
        };
        let mut out = self.blocks[first].clone();
        out.extend(rest.iter().map(|&b| *self.blocks[b].last().unwrap()));
        out
    }

    /// The set of blocks whose first symbol lies in `set`: the recoded form of
    /// the constraint `x_j ∈ set`.
    pub fn lift_set(&self, set: &SymbolSet) -> SymbolSet {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| set.contains(&b[0]))
            .map(|(i, _)| i)
            .collect()
    }

    /// First original symbol of each state.
    pub fn first_symbol(&self, state: Symbol) -> Symbol {
        self.blocks[state][0]
    }
}

/// Recodes a range-`r` potential as a range ≤ 2 potential on the subshift of
/// admissible `(r−1)`-blocks. For `r ≤ 2` the recoding is the identity.
pub fn two_block_recode(model: &SftModel, phi: &FiniteRangePotential) -> Result<BlockRecoding> {
    phi.check_model(model)?;
    let r = phi.range();
    if r <= 2 {
        return Ok(BlockRecoding {
            model: model.clone(),
            potential: phi.clone(),
            blocks: (0..model.alphabet_size()).map(|s| vec![s]).collect(),
            block_len: 1,
        });
    }
    let block_len = r - 1;
    let blocks = model.admissible_words(block_len);
    let transition: Vec<Vec<u8>> = blocks
        .iter()
        .map(|b| {
            blocks
                .iter()
                .map(|c| (b[1..] == c[..block_len - 1]) as u8)
                .collect()
        })
        .collect();
    let sep = if model.names().iter().all(|n| n.chars().count() == 1) {
        ""
    } else {
        "."
    };
    let names = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&s| model.name(s))
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect();
    let recoded = SftModel::with_names(names, &transition)?;
    let potential = FiniteRangePotential::from_fn(&recoded, 2, |pair| {
        let mut word = blocks[pair[0]].clone();
        word.push(*blocks[pair[1]].last().unwrap());
        phi.extended_value(&word)
    })?;
    debug_assert_eq!(potential.table().len() as u128, model.count_words(r));
    Ok(BlockRecoding {
        model: recoded,
        potential,
        blocks,
        block_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ising(model: &SftModel) -> FiniteRangePotential {
        FiniteRangePotential::from_fn(model, 2, |w| (w[0] * w[1]) as f64).unwrap()
    }

    fn brute_var(model: &SftModel, phi: &FiniteRangePotential, k: usize) -> f64 {
        // pairs of admissible words on [-k, max(k, r-1)] agreeing on [-k, k]
        let r = phi.range();
        let len = 2 * k + 1 + r.saturating_sub(k + 1);
        let words = model.admissible_words(len);
        let mut best: f64 = 0.0;
        for x in &words {
            for y in &words {
                if x[..2 * k + 1] == y[..2 * k + 1] {
                    let d = phi.value(&x[k..]).unwrap() - phi.value(&y[k..]).unwrap();
                    best = best.max(d.abs());
                }
            }
        }
        best
    }

    #[test]
    fn var_k_examples() {
        let full = SftModel::full_shift(2).unwrap();
        let zero = FiniteRangePotential::zero(&full);
        let coord = FiniteRangePotential::from_fn(&full, 1, |w| w[0] as f64).unwrap();
        let is = ising(&full);
        for k in 0..4 {
            assert_eq!(var_k(&full, &zero, k).unwrap(), 0.0);
            assert_eq!(var_k(&full, &coord, k).unwrap(), 0.0);
        }
        assert_eq!(var_k(&full, &is, 0).unwrap(), 1.0);
        assert_eq!(var_k(&full, &is, 1).unwrap(), 0.0);
    }

    #[test]
    fn var_k_matches_pair_enumeration() {
        let gm = SftModel::golden_mean();
        let phi = FiniteRangePotential::from_fn(&gm, 4, |w| {
            w.iter().enumerate().map(|(i, &s)| (i + 1) as f64 * s as f64 * 0.7).sum::<f64>() - 0.3 * w[0] as f64
        })
        .unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..5 {
            let v = var_k(&gm, &phi, k).unwrap();
            assert!((v - brute_var(&gm, &phi, k)).abs() < 1e-12, "k = {k}");
            assert!(v <= prev);
            prev = v;
        }
        assert_eq!(var_k(&gm, &phi, 3).unwrap(), 0.0);
    }

    #[test]
    fn decay_envelope_examples() {
        let full = SftModel::full_shift(2).unwrap();
        let zero = FiniteRangePotential::zero(&full);
        let env = decay_envelope(&full, &zero, 0.5).unwrap();
        assert_eq!((env.b, env.tail_bound), (0.0, 0.0));
        let env = decay_envelope(&full, &ising(&full), 0.5).unwrap();
        assert_eq!((env.b, env.tail_bound), (1.0, 2.0));
        let coord = FiniteRangePotential::from_fn(&full, 1, |w| 3.0 * w[0] as f64).unwrap();
        assert_eq!(decay_envelope(&full, &coord, 0.9).unwrap().b, 0.0);
        assert_eq!(decay_envelope(&full, &zero, 1.0), Err(Error::BadAlpha(1.0)));
        assert_eq!(decay_envelope(&full, &zero, 0.0), Err(Error::BadAlpha(0.0)));
    }

    #[test]
    fn envelope_dominates_variations() {
        let gm = SftModel::golden_mean();
        let phi = FiniteRangePotential::from_fn(&gm, 4, |w| (w[0] + 2 * w[2] + 3 * w[3]) as f64).unwrap();
        for alpha in [0.1, 0.5, 0.9] {
            let env = decay_envelope(&gm, &phi, alpha).unwrap();
            for k in 0..8 {
                let v = var_k(&gm, &phi, k).unwrap();
                assert!(v <= env.b * alpha.powi(k as i32) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn homology_examples() {
        let full = SftModel::full_shift(2).unwrap();
        let zero = FiniteRangePotential::zero(&full);
        let coord = FiniteRangePotential::from_fn(&full, 1, |w| w[0] as f64).unwrap();
        let psi = FiniteRangePotential::from_fn(&full, 2, |w| 2.0 * w[0] as f64 - w[1] as f64).unwrap();
        assert!(check_homology(&full, &coord, &coord, &zero).unwrap());
        assert!(check_homology(&full, &coord, &psi, &coord).unwrap());
        let shifted = FiniteRangePotential::from_fn(&full, 1, |w| w[0] as f64 + 1.0).unwrap();
        assert!(!check_homology(&full, &coord, &shifted, &zero).unwrap());
        let other = FiniteRangePotential::zero(&SftModel::full_shift(3).unwrap());
        assert!(matches!(
            check_homology(&full, &coord, &psi, &other),
            Err(Error::RangeMismatch(_))
        ));
    }

    #[test]
    fn from_table_requires_every_admissible_word() {
        let gm = SftModel::golden_mean();
        let mut table = BTreeMap::from([(vec![0, 0], 0.1), (vec![0, 1], 0.2)]);
        assert_eq!(
            FiniteRangePotential::from_table(&gm, 2, table.clone()),
            Err(Error::IncompleteTable("1 0".into()))
        );
        table.insert(vec![1, 0], 0.3);
        assert!(FiniteRangePotential::from_table(&gm, 2, table.clone()).is_ok());
        table.insert(vec![1, 1], 0.3);
        assert!(matches!(
            FiniteRangePotential::from_table(&gm, 2, table),
            Err(Error::RangeMismatch(_))
        ));
    }

    #[test]
    fn recode_examples() {
        let full = SftModel::full_shift(2).unwrap();
        let is = ising(&full);
        let id = two_block_recode(&full, &is).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.model, full);
        assert_eq!(id.potential, is);
        assert_eq!(id.block_map(&[0, 1, 1]), vec![0, 1, 1]);

        let r3 = FiniteRangePotential::from_fn(&full, 3, |w| (w[0] + w[2]) as f64).unwrap();
        let rec = two_block_recode(&full, &r3).unwrap();
        assert_eq!(rec.model.alphabet_size(), 4);
        assert_eq!(rec.model.names(), &["00", "01", "10", "11"]);
        let i = |name: &str| rec.model.symbol_index(name).unwrap();
        assert!(rec.model.allowed(i("01"), i("10")));
        assert!(!rec.model.allowed(i("01"), i("00")));
        for m in 1..=10 {
            assert_eq!(rec.model.count_words(m), full.count_words(m + 1));
        }

        let gm = SftModel::golden_mean();
        let r3 = FiniteRangePotential::from_fn(&gm, 3, |w| w[1] as f64).unwrap();
        let rec = two_block_recode(&gm, &r3).unwrap();
        assert_eq!(rec.model.names(), &["00", "01", "10"]);
        for m in 1..=10 {
            let words = rec.model.admissible_words(m);
            assert_eq!(words.len() as u128, gm.count_words(m + 1));
            for w in &words {
                let orig = rec.block_map(w);
                assert_eq!(orig.len(), m + 1);
                assert!(gm.is_admissible(&orig));
            }
        }
    }

    #[test]
    fn recoded_potential_reads_the_same_values() {
        let gm = SftModel::golden_mean();
        let phi = FiniteRangePotential::from_fn(&gm, 4, |w| (w[0] + 2 * w[1] + 4 * w[2] + 8 * w[3]) as f64).unwrap();
        let rec = two_block_recode(&gm, &phi).unwrap();
        for w in rec.model.admissible_words(2) {
            let orig = rec.block_map(&w);
            assert_eq!(rec.potential.value(&w), phi.value(&orig));
        }
    }
}
