//! Finite-support permutations of the integers and their action on sequences.
//!
//! A permutation `τ` acts on configurations by `(T_τ x)_n = x_{τ(n)}`, which
//! makes the action contravariant: `T_{τ∘σ} = T_σ ∘ T_τ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sft::{left_right_sets, q_pairs, SftModel, Symbol};

/// A bijection of the integers fixing all but finitely many points.
///
/// Only moved points are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FiniteSupportPermutation {
    moved: BTreeMap<i64, i64>,
}

impl FiniteSupportPermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `(from, to)` pairs; pairs with `from == to` are dropped.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Result<Self> {
        let mut moved = BTreeMap::new();
        for (from, to) in pairs {
            if moved.insert(from, to).is_some() {
                return Err(Error::InvalidPermutation(format!(
                    "point {from} mapped twice"
                )));
            }
        }
        moved.retain(|from, to| from != to);
        let mut images: Vec<i64> = moved.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        if images.len() != moved.len() {
            return Err(Error::InvalidPermutation("not injective".into()));
        }
        if !images.iter().copied().eq(moved.keys().copied()) {
            return Err(Error::InvalidPermutation(
                "moved points are not mapped onto themselves".into(),
            ));
        }
        Ok(FiniteSupportPermutation { moved })
    }

    pub fn transposition(a: i64, b: i64) -> Self {
        if a == b {
            return Self::identity();
        }
        FiniteSupportPermutation {
            moved: BTreeMap::from([(a, b), (b, a)]),
        }
    }

    /// The involution `σ_{P,k}` exchanging the blocks `1..=k` and `P+1..=P+k`.
    pub fn swap_involution(p: i64, k: i64) -> Result<Self> {
        if k < 1 || k >= p {
            return Err(Error::BadParameters(format!(
                "swap involution needs 1 <= k < P, got P = {p}, k = {k}"
            )));
        }
        let mut moved = BTreeMap::new();
        for j in 1..=k {
            moved.insert(j, p + j);
            moved.insert(p + j, j);
        }
        Ok(FiniteSupportPermutation { moved })
    }

    #[inline]
    pub fn apply(&self, j: i64) -> i64 {
        self.moved.get(&j).copied().unwrap_or(j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteSupportPermutation) -> FiniteSupportPermutation {
        let moved = self
            .moved
            .keys()
            .chain(other.moved.keys())
            .map(|&j| (j, self.apply(other.apply(j))))
            .filter(|(j, to)| j != to)
            .collect();
        FiniteSupportPermutation { moved }
    }

    pub fn invert(&self) -> FiniteSupportPermutation {
        FiniteSupportPermutation {
            moved: self.moved.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    pub fn is_involution(&self) -> bool {
        self.moved.iter().all(|(&a, &b)| self.apply(b) == a)
    }

    /// `M(τ)`: the smallest natural number with `|j| ≥ M(τ) ⇒ τ(j) = j`.
    pub fn support_radius(&self) -> i64 {
        self.moved.keys().map(|j| j.abs() + 1).max().unwrap_or(0)
    }

    /// Smallest and largest moved points.
    pub fn support_span(&self) -> Option<(i64, i64)> {
        let lo = *self.moved.keys().next()?;
        let hi = *self.moved.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn moved_points(&self) -> impl Iterator<Item = i64> + '_ {
        self.moved.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.moved.iter().map(|(&a, &b)| (a, b))
    }
}

impl Serialize for FiniteSupportPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs())
    }
}

/// Serialized forms of a permutation: a list of `(from, to)` pairs or
/// `{"swap": {"P": .., "k": ..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermutationSpec {
    Swap { swap: SwapParams },
    Pairs(Vec<(i64, i64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapParams {
    #[serde(rename = "P")]
    pub p: i64,
    pub k: i64,
}

impl PermutationSpec {
    pub fn build(&self) -> Result<FiniteSupportPermutation> {
        match self {
            PermutationSpec::Swap { swap } => {
                FiniteSupportPermutation::swap_involution(swap.p, swap.k)
            }
            PermutationSpec::Pairs(pairs) => {
                FiniteSupportPermutation::from_pairs(pairs.iter().copied())
            }
        }
    }
}

/// A configuration restricted to `[offset, offset + len − 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WindowConfiguration {
    pub offset: i64,
    pub symbols: Vec<Symbol>,
}

impl WindowConfiguration {
    pub fn new(offset: i64, symbols: Vec<Symbol>) -> Self {
        WindowConfiguration { offset, symbols }
    }

    pub fn lo(&self) -> i64 {
        self.offset
    }

    /// Last covered position (`offset − 1` for an empty window).
    pub fn hi(&self) -> i64 {
        self.offset + self.symbols.len() as i64 - 1
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (self.lo() <= lo && hi <= self.hi())
    }

    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::WindowTooSmall {
                need_lo: lo,
                need_hi: hi,
                have_lo: self.lo(),
                have_hi: self.hi(),
            })
        }
    }

    #[inline]
    pub fn get(&self, pos: i64) -> Option<Symbol> {
        let i = pos - self.offset;
        if i < 0 {
            return None;
        }
        self.symbols.get(i as usize).copied()
    }

    /// Symbols at `pos, pos + 1, ..., pos + len − 1`.
    pub fn slice(&self, pos: i64, len: usize) -> Option<&[Symbol]> {
        let i = pos - self.offset;
        if i < 0 || i as usize + len > self.symbols.len() {
            return None;
        }
        Some(&self.symbols[i as usize..i as usize + len])
    }
}

fn require_support(tau: &FiniteSupportPermutation, window: &WindowConfiguration, pad: i64) -> Result<()> {
    match tau.support_span() {
        Some((lo, hi)) => window.require(lo - pad, hi + pad),
        None => Ok(()),
    }
}

/// `T_τ x` on the same window: the output symbol at `n` is the input symbol at `τ(n)`.
pub fn apply_permutation(
    tau: &FiniteSupportPermutation,
    window: &WindowConfiguration,
) -> Result<WindowConfiguration> {
    require_support(tau, window, 0)?;
    let symbols = (window.lo()..=window.hi())
        .map(|n| window.get(tau.apply(n)).expect("support is inside window"))
        .collect();
    Ok(WindowConfiguration::new(window.offset, symbols))
}

/// Membership of `x` in `Γ_σ = Σ ∩ T_σ^{-1} Σ`, decided on a window.
///
/// The window must contain the moved points and one neighbor on each side,
/// so that every adjacency changed by `σ` is visible.
pub fn gamma_membership(
    model: &SftModel,
    sigma: &FiniteSupportPermutation,
    window: &WindowConfiguration,
) -> Result<bool> {
    require_support(sigma, window, 1)?;
    if !model.is_admissible(&window.symbols) {
        return Ok(false);
    }
    let image = apply_permutation(sigma, window)?;
    Ok(model.is_admissible(&image.symbols))
}

/// Outcome of the two routes to membership in `Γ_{P,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaPCheck {
    pub direct: bool,
    pub formula: bool,
}

/// Decides `x ∈ Γ_{P,k}` directly and through the union
/// `⋃_{(a,b),(c,d) ∈ Q} C_k(a,b,c,d) ∩ S^{-P} D_k(a,b,c,d)`.
pub fn gamma_p_formula_check(
    model: &SftModel,
    p: i64,
    k: i64,
    window: &WindowConfiguration,
) -> Result<GammaPCheck> {
    let sigma = FiniteSupportPermutation::swap_involution(p, k)?;
    window.require(0, p + k + 1)?;
    let direct = gamma_membership(model, &sigma, window)?;

    let at = |pos: i64| window.get(pos).expect("window covers [0, P+k+1]");
    let q = q_pairs(model);
    let mut formula = false;
    if model.is_admissible(&window.symbols) {
        'outer: for &(a, b) in &q {
            for &(c, d) in &q {
                let in_c = at(0) == a && at(1) == b && at(k) == c && at(k + 1) == d;
                if !in_c {
                    continue;
                }
                let (lb, _) = left_right_sets(model, b)?;
                let (_, ra) = left_right_sets(model, a)?;
                let (ld, _) = left_right_sets(model, d)?;
                let (_, rc) = left_right_sets(model, c)?;
                if lb.contains(&at(p))
                    && ra.contains(&at(p + 1))
                    && ld.contains(&at(p + k))
                    && rc.contains(&at(p + k + 1))
                {
                    formula = true;
                    break 'outer;
                }
            }
        }
    }
    Ok(GammaPCheck { direct, formula })
}
