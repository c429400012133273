//! Subshifts of finite type, cylinders and the mixing constants `k0`, `P0(k)`.
//!
//! A model is an alphabet `0..n` together with a 0/1 transition matrix. A
//! bi-infinite sequence is admissible when every adjacent pair is allowed.
//! Because every symbol has a successor and a predecessor, any admissible
//! finite word extends to an admissible bi-infinite sequence, so all the
//! nonemptiness questions below reduce to finite word problems.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub type Symbol = usize;
pub type SymbolSet = BTreeSet<Symbol>;

/// Alphabet and transition matrix of a subshift of finite type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftModel {
    n: usize,
    allowed: Vec<bool>,
    names: Vec<String>,
}

impl SftModel {
    /// Validates a 0/1 transition matrix. Symbols get the names `0`, `1`, ...
    pub fn new(alphabet_size: usize, transition: &[Vec<u8>]) -> Result<Self> {
        let names = (0..alphabet_size).map(|i| i.to_string()).collect();
        Self::with_names(names, transition)
    }

    /// Like [`SftModel::new`], with explicit symbol names (index = position in `names`).
    pub fn with_names(names: Vec<String>, transition: &[Vec<u8>]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::BadShape("alphabet is empty".into()));
        }
        if transition.len() != n {
            return Err(Error::BadShape(format!(
                "expected {n} rows, got {}",
                transition.len()
            )));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::BadShape("duplicate symbol names".into()));
        }
        let mut allowed = Vec::with_capacity(n * n);
        for (i, row) in transition.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadShape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &e in row {
                match e {
                    0 => allowed.push(false),
                    1 => allowed.push(true),
                    other => {
                        return Err(Error::BadShape(format!(
                            "entry {other} in row {i} is not 0/1"
                        )))
                    }
                }
            }
        }
        let model = SftModel { n, allowed, names };
        for i in 0..n {
            if !(0..n).any(|j| model.allowed(i, j)) {
                return Err(Error::ZeroRow(i));
            }
        }
        for j in 0..n {
            if !(0..n).any(|i| model.allowed(i, j)) {
                return Err(Error::ZeroColumn(j));
            }
        }
        Ok(model)
    }

    /// Full shift on `n` symbols.
    pub fn full_shift(n: usize) -> Result<Self> {
        Self::new(n, &vec![vec![1; n]; n])
    }

    /// Golden mean shift: the word `11` is forbidden.
    pub fn golden_mean() -> Self {
        Self::new(2, &[vec![1, 1], vec![1, 0]]).expect("golden mean shift is valid")
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s]
    }

    pub fn symbol_index(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn allowed(&self, i: Symbol, j: Symbol) -> bool {
        self.allowed[i * self.n + j]
    }

    /// The transition matrix as 0/1 rows.
    pub fn transition_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.allowed(i, j) as u8).collect())
            .collect()
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s < self.n {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet_size: self.n,
            })
        }
    }

    /// True when every symbol is in range and every adjacent pair is allowed.
    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        word.iter().all(|&s| s < self.n) && word.windows(2).all(|w| self.allowed(w[0], w[1]))
    }

    /// All admissible words of the given length, in lexicographic order.
    pub fn admissible_words(&self, len: usize) -> Vec<Vec<Symbol>> {
        let mut out = Vec::new();
        if len == 0 {
            out.push(Vec::new());
            return out;
        }
        let mut word = Vec::with_capacity(len);
        for s in 0..self.n {
            word.push(s);
            self.extend_words(&mut word, len, &mut out);
            word.pop();
        }
        out
    }

    fn extend_words(&self, word: &mut Vec<Symbol>, len: usize, out: &mut Vec<Vec<Symbol>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        let last = *word.last().unwrap();
        for s in 0..self.n {
            if self.allowed(last, s) {
                word.push(s);
                self.extend_words(word, len, out);
                word.pop();
            }
        }
    }

    /// Number of admissible words of length `len`, via transfer-matrix counting.
    pub fn count_words(&self, len: usize) -> u128 {
        if len == 0 {
            return 1;
        }
        let mut v = vec![1u128; self.n];
        for _ in 1..len {
            let mut next = vec![0u128; self.n];
            for (i, &vi) in v.iter().enumerate() {
                for (j, nj) in next.iter_mut().enumerate() {
                    if self.allowed(i, j) {
                        *nj += vi;
                    }
                }
            }
            v = next;
        }
        v.iter().sum()
    }

    fn successors_of(&self, set: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.n];
        for i in (0..self.n).filter(|&i| set[i]) {
            for (j, o) in out.iter_mut().enumerate() {
                if self.allowed(i, j) {
                    *o = true;
                }
            }
        }
        out
    }
}

/// Finitely many coordinate constraints `x_j ∈ A_j`.
///
/// The empty constraint map is the whole space. Constraining the same
/// position twice intersects the sets; an empty intersection makes the
/// cylinder the empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    constraints: BTreeMap<i64, SymbolSet>,
}

impl Cylinder {
    pub fn whole() -> Self {
        Self::default()
    }

    /// Cylinder fixing `word` at positions `offset, offset + 1, ...`.
    pub fn word(offset: i64, word: &[Symbol]) -> Self {
        let constraints = word
            .iter()
            .enumerate()
            .map(|(i, &s)| (offset + i as i64, SymbolSet::from([s])))
            .collect();
        Cylinder { constraints }
    }

    /// Adds `x_pos ∈ set`. Fails on an empty user-supplied set.
    pub fn with_set(mut self, pos: i64, set: SymbolSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySymbolSet(pos));
        }
        self.constrain(pos, set);
        Ok(self)
    }

    /// Adds `x_pos = s`.
    pub fn with(mut self, pos: i64, s: Symbol) -> Self {
        self.constrain(pos, SymbolSet::from([s]));
        self
    }

    fn constrain(&mut self, pos: i64, set: SymbolSet) {
        match self.constraints.get_mut(&pos) {
            Some(existing) => existing.retain(|s| set.contains(s)),
            None => {
                self.constraints.insert(pos, set);
            }
        }
    }

    /// Intersection of two cylinders.
    pub fn intersect(&self, other: &Cylinder) -> Cylinder {
        let mut out = self.clone();
        for (&p, set) in &other.constraints {
            out.constrain(p, set.clone());
        }
        out
    }

    /// `S^{-t} C`: every constraint moves from position `j` to `j + t`.
    pub fn shifted(&self, t: i64) -> Cylinder {
        Cylinder {
            constraints: self
                .constraints
                .iter()
                .map(|(&p, s)| (p + t, s.clone()))
                .collect(),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.constraints.is_empty()
    }

    /// True if some constraint set is empty (the cylinder is trivially ∅).
    pub fn has_empty_set(&self) -> bool {
        self.constraints.values().any(|s| s.is_empty())
    }

    pub fn get(&self, pos: i64) -> Option<&SymbolSet> {
        self.constraints.get(&pos)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &SymbolSet)> {
        self.constraints.iter().map(|(&p, s)| (p, s))
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.constraints.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Smallest and largest constrained positions.
    pub fn span(&self) -> Option<(i64, i64)> {
        let lo = *self.constraints.keys().next()?;
        let hi = *self.constraints.keys().next_back()?;
        Some((lo, hi))
    }

    /// Does the finite configuration `symbols` (placed at `offset`) satisfy every constraint?
    /// Constraints outside the configuration count as unsatisfied.
    pub fn contains(&self, offset: i64, symbols: &[Symbol]) -> bool {
        self.constraints.iter().all(|(&p, set)| {
            let i = p - offset;
            i >= 0 && (i as usize) < symbols.len() && set.contains(&symbols[i as usize])
        })
    }
}

/// Result of the primitivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MixingReport {
    pub is_mixing: bool,
    /// Minimal `M` with every entry of `Λ^M` positive.
    #[serde(rename = "M")]
    pub exponent: Option<usize>,
}

/// Wielandt's bound `n² − 2n + 2` on the primitivity exponent.
pub fn wielandt_bound(n: usize) -> usize {
    n * n + 2 - 2 * n
}

fn bool_mul(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    if b[k * n + j] {
                        out[i * n + j] = true;
                    }
                }
            }
        }
    }
    out
}

/// Decides primitivity of the transition matrix with saturating boolean powers.
pub fn check_mixing(model: &SftModel) -> MixingReport {
    let n = model.n;
    let mut power = model.allowed.clone();
    for m in 1..=wielandt_bound(n) {
        if power.iter().all(|&b| b) {
            return MixingReport {
                is_mixing: true,
                exponent: Some(m),
            };
        }
        power = bool_mul(&power, &model.allowed, n);
    }
    MixingReport {
        is_mixing: false,
        exponent: None,
    }
}

/// `L(a)`, the symbols allowed before `a`, and `R(a)`, the symbols allowed after it.
pub fn left_right_sets(model: &SftModel, a: Symbol) -> Result<(SymbolSet, SymbolSet)> {
    model.check_symbol(a)?;
    let left = (0..model.n).filter(|&j| model.allowed(j, a)).collect();
    let right = (0..model.n).filter(|&j| model.allowed(a, j)).collect();
    Ok((left, right))
}

/// The set `Q` of allowed ordered pairs `(a, b)`.
pub fn q_pairs(model: &SftModel) -> Vec<(Symbol, Symbol)> {
    let n = model.n;
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| model.allowed(a, b))
        .collect()
}

/// Is the cylinder nonempty in the subshift?
///
/// Forward propagation of the reachable symbol set from the leftmost
/// constraint to the rightmost one.
pub fn constrained_word_exists(model: &SftModel, cylinder: &Cylinder) -> bool {
    let mut iter = cylinder.iter();
    let Some((mut prev, first)) = iter.next() else {
        return true;
    };
    let mut reach: Vec<bool> = (0..model.n).map(|s| first.contains(&s)).collect();
    if !reach.iter().any(|&b| b) {
        return false;
    }
    for (pos, set) in iter {
        for _ in prev..pos {
            reach = model.successors_of(&reach);
        }
        for (s, r) in reach.iter_mut().enumerate() {
            *r = *r && set.contains(&s);
        }
        if !reach.iter().any(|&b| b) {
            return false;
        }
        prev = pos;
    }
    true
}

/// `C_k(a,b,c,d) = (x_0 = a, x_1 = b, x_k = c, x_{k+1} = d)`.
pub fn c_k(a: Symbol, b: Symbol, c: Symbol, d: Symbol, k: usize) -> Cylinder {
    let k = k as i64;
    Cylinder::whole()
        .with(0, a)
        .with(1, b)
        .with(k, c)
        .with(k + 1, d)
}

/// `D_k(a,b,c,d) = (x_0 ∈ L(b), x_1 ∈ R(a), x_k ∈ L(d), x_{k+1} ∈ R(c))`.
pub fn d_k(
    model: &SftModel,
    a: Symbol,
    b: Symbol,
    c: Symbol,
    d: Symbol,
    k: usize,
) -> Result<Cylinder> {
    let k = k as i64;
    let (lb, _) = left_right_sets(model, b)?;
    let (_, ra) = left_right_sets(model, a)?;
    let (ld, _) = left_right_sets(model, d)?;
    let (_, rc) = left_right_sets(model, c)?;
    Ok(Cylinder::whole()
        .with_set_unchecked(0, lb)
        .with_set_unchecked(1, ra)
        .with_set_unchecked(k, ld)
        .with_set_unchecked(k + 1, rc))
}

impl Cylinder {
    fn with_set_unchecked(mut self, pos: i64, set: SymbolSet) -> Self {
        self.constrain(pos, set);
        self
    }
}

fn all_c_k_nonempty(model: &SftModel, q: &[(Symbol, Symbol)], k: usize) -> bool {
    q.iter().all(|&(a, b)| {
        q.iter()
            .all(|&(c, d)| constrained_word_exists(model, &c_k(a, b, c, d, k)))
    })
}

/// Smallest `k0 ≥ 1` with every `C_k(a,b,c,d)`, `(a,b),(c,d) ∈ Q`, nonempty for all `k ≥ k0`.
///
/// For `k ≥ 2`, `C_k` is nonempty iff `Λ^{k−1}[b,c] > 0`; every symbol occurs as
/// some `b` and some `c`, so the answer is the primitivity exponent plus one.
/// The `k = 1` case (overlapping coordinates) is decided directly.
pub fn compute_k0(model: &SftModel) -> Result<usize> {
    let exponent = check_mixing(model).exponent.ok_or(Error::NotMixing)?;
    let mut k0 = exponent + 1;
    let q = q_pairs(model);
    while k0 > 1 && all_c_k_nonempty(model, &q, k0 - 1) {
        k0 -= 1;
    }
    Ok(k0)
}

/// The cylinder `C_k(a,b,c,d) ∩ S^{-P} D_k(a,b,c,d)`.
pub fn c_k_cap_shifted_d_k(
    model: &SftModel,
    (a, b): (Symbol, Symbol),
    (c, d): (Symbol, Symbol),
    k: usize,
    p: usize,
) -> Result<Cylinder> {
    Ok(c_k(a, b, c, d, k).intersect(&d_k(model, a, b, c, d, k)?.shifted(p as i64)))
}

/// Search cap for [`compute_p0`].
pub fn p0_search_cap(model: &SftModel, k: usize) -> usize {
    2 * wielandt_bound(model.n) + 2 * k + 4
}

/// Smallest `P0 > k` such that `C_k ∩ S^{-P} D_k` is nonempty for all pairs in `Q`
/// and every `P ≥ P0`.
pub fn compute_p0(model: &SftModel, k: usize) -> Result<usize> {
    let k0 = compute_k0(model)?;
    if k < k0 || k == 0 {
        return Err(Error::KTooSmall { k, k0 });
    }
    let q = q_pairs(model);
    let mut p0 = k + 1;
    for p in (k + 1)..=p0_search_cap(model, k) {
        let ok = q.iter().all(|&ab| {
            q.iter().all(|&cd| {
                c_k_cap_shifted_d_k(model, ab, cd, k, p)
                    .map(|cyl| constrained_word_exists(model, &cyl))
                    .unwrap_or(false)
            })
        });
        if !ok {
            p0 = p + 1;
        }
    }
    Ok(p0)
}
