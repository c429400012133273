//! TOML model and potential files.
//!
//! ```toml
//! alphabet = ["0", "1"]
//! transition = ["11", "10"]
//!
//! [potential]          # optional
//! range = 2
//! alpha = 0.5          # optional
//! values = { "0 0" = 0.0, "0 1" = 0.0, "1 0" = 0.0 }
//!
//! [measure]            # optional: replaces the Gibbs chain
//! stochastic = [[0.7, 0.3], [0.4, 0.6]]
//! ```
//!
//! A standalone potential file holds the `range`, `alpha` and `values` keys at
//! top level. Words are space-separated symbol names; when every name is a
//! single character the spaces may be dropped.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::potential::{FiniteRangePotential, DEFAULT_ALPHA};
use crate::sft::{SftModel, Symbol};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    alphabet: Spanned<Vec<String>>,
    transition: Spanned<Vec<Spanned<String>>>,
    potential: Option<Spanned<PotentialDoc>>,
    measure: Option<Spanned<MeasureDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialDoc {
    range: usize,
    alpha: Option<f64>,
    values: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureDoc {
    stochastic: Vec<Vec<f64>>,
}

/// Contents of a model file.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: SftModel,
    pub potential: Option<FiniteRangePotential>,
    pub alpha: f64,
    pub stochastic: Option<Matrix>,
}

fn line_of(src: &str, span: &Range<usize>) -> usize {
    src[..span.start.min(src.len())].matches('\n').count() + 1
}

fn toml_error(src: &str, e: toml::de::Error) -> Error {
    Error::Parse {
        line: e.span().map_or(0, |s| line_of(src, &s)),
        reason: e.message().trim().to_string(),
    }
}

/// Splits a word into symbols by name.
pub fn parse_word(model: &SftModel, text: &str) -> std::result::Result<Vec<Symbol>, String> {
    let single_chars = model.names().iter().all(|n| n.chars().count() == 1);
    let tokens: Vec<String> = if text.split_whitespace().count() > 1 || !single_chars {
        text.split_whitespace().map(str::to_string).collect()
    } else {
        text.trim().chars().map(String::from).collect()
    };
    tokens
        .iter()
        .map(|t| model.symbol_index(t).ok_or_else(|| format!("unknown symbol {t:?}")))
        .collect()
}

fn build_potential(src: &str, model: &SftModel, doc: &PotentialDoc, span: &Range<usize>) -> Result<(FiniteRangePotential, f64)> {
    let line = line_of(src, span);
    let parse = |reason: String| Error::Parse { line, reason };
    let mut table = BTreeMap::new();
    for (key, &value) in &doc.values {
        let word = parse_word(model, key).map_err(parse)?;
        if table.insert(word, value).is_some() {
            return Err(parse(format!("word {key:?} listed twice")));
        }
    }
    let potential = FiniteRangePotential::from_table(model, doc.range, table).map_err(|e| match e {
        Error::IncompleteTable(w) => parse(format!("incomplete table: missing word {w:?}")),
        other => parse(other.to_string()),
    })?;
    let alpha = doc.alpha.unwrap_or(DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(parse(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok((potential, alpha))
}

pub fn parse_model_str(src: &str) -> Result<ModelFile> {
    let doc: ModelDoc = toml::from_str(src).map_err(|e| toml_error(src, e))?;
    let names = doc.alphabet.get_ref().clone();
    if names.is_empty() {
        return Err(Error::Parse {
            line: line_of(src, &doc.alphabet.span()),
            reason: "alphabet is empty".into(),
        });
    }
    let mut rows = Vec::with_capacity(names.len());
    for row in doc.transition.get_ref() {
        let parse = |reason: String| Error::Parse {
            line: line_of(src, &row.span()),
            reason,
        };
        let bits: Vec<u8> = row
            .get_ref()
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(parse(format!("transition entries must be 0 or 1, found {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != names.len() {
            return Err(parse(format!(
                "transition row has {} entries, expected {}",
                bits.len(),
                names.len()
            )));
        }
        rows.push(bits);
    }
    let model = SftModel::with_names(names, &rows)?;
    let (potential, alpha) = match &doc.potential {
        Some(p) => {
            let (phi, alpha) = build_potential(src, &model, p.get_ref(), &p.span())?;
            (Some(phi), alpha)
        }
        None => (None, DEFAULT_ALPHA),
    };
    let stochastic = doc.measure.map(|m| m.into_inner().stochastic);
    Ok(ModelFile {
        model,
        potential,
        alpha,
        stochastic,
    })
}

/// Parses a standalone potential file against `model`.
pub fn parse_potential_str(src: &str, model: &SftModel) -> Result<(FiniteRangePotential, f64)> {
    let doc: PotentialDoc = toml::from_str(src).map_err(|e| toml_error(src, e))?;
    build_potential(src, model, &doc, &(0..0))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_model_file(path: &Path) -> Result<ModelFile> {
    parse_model_str(&read(path)?)
}

pub fn parse_potential_file(path: &Path, model: &SftModel) -> Result<(FiniteRangePotential, f64)> {
    parse_potential_str(&read(path)?, model)
}
