use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transition matrix has bad shape: {0}")]
    BadShape(String),
    #[error("symbol {0} has no successor (zero row)")]
    ZeroRow(usize),
    #[error("symbol {0} has no predecessor (zero column)")]
    ZeroColumn(usize),
    #[error("symbol {symbol} out of range for alphabet of size {alphabet_size}")]
    SymbolOutOfRange { symbol: usize, alphabet_size: usize },
    #[error("empty symbol set at position {0}")]
    EmptySymbolSet(i64),
    #[error("subshift is not topologically mixing")]
    NotMixing,
    #[error("k = {k} is below k0 = {k0}")]
    KTooSmall { k: usize, k0: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("window [{have_lo}, {have_hi}] does not cover [{need_lo}, {need_hi}]")]
    WindowTooSmall {
        need_lo: i64,
        need_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },
    #[error("configuration is outside the admissible domain of the permutation")]
    OutsideGamma,
    #[error("alpha must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("potential does not match model: {0}")]
    RangeMismatch(String),
    #[error("incomplete table: missing admissible word {0}")]
    IncompleteTable(String),
    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("cylinder has zero measure")]
    NullCylinder,
    #[error("permutation is not an involution")]
    NotInvolution,
    #[error("bad support: {0}")]
    BadSupport(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
