use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid UTF-8 at byte offset {offset}")]
    Encoding { offset: usize },

    #[error("invalid language config: {0}")]
    LangConfig(String),

    #[error("text `{text_id}` too short: {intervals} interval(s), need at least 2")]
    TextTooShort { text_id: String, intervals: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("likelihood is not finite at p={p}, beta={beta}")]
    FitBoundary { p: f64, beta: f64 },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("degenerate plot bounds: {0}")]
    DegenerateBounds(String),

    #[error("series too short for DFA: length {len}, need at least {min_len}")]
    SeriesTooShort { len: usize, min_len: usize },

    #[error("invalid scales: {0}")]
    InvalidScales(String),

    #[error("non-positive fluctuation F({scale}) = {value}")]
    NonPositiveFluctuation { scale: usize, value: f64 },

    #[error("Hurst exponent {0} outside (0, 2)")]
    ExponentOutOfRange(f64),

    #[error("too few {what}: need at least {need}, got {got}")]
    TooFew { what: String, need: usize, got: usize },

    #[error("no root: {0}")]
    NoRoot(String),
}
