//! Text ingestion: mark-level cleanup, tokenization into words and
//! punctuation marks, and interval extraction.

mod config;
mod intervals;
mod preprocess;
mod tokenize;

pub use config::{parse_abbreviations, LangConfig, StripRules, CORPUS_LANGUAGES};
pub use intervals::{extract_intervals, extract_segments, IntervalSeries, PunctMode};
pub use preprocess::{decode, preprocess};
pub use tokenize::{tokenize, Event, EventStream, MarkKind};

use crate::error::Result;

/// Preprocesses and tokenizes raw text in one go.
pub fn events_from_text(raw_text: &str, config: &LangConfig) -> EventStream {
    tokenize(&preprocess(raw_text, config))
}

pub fn intervals_from_text(
    raw_text: &str,
    config: &LangConfig,
    text_id: &str,
    mode: PunctMode,
) -> Result<IntervalSeries> {
    extract_intervals(&events_from_text(raw_text, config), mode, text_id)
}

pub(crate) fn is_dash_char(c: char) -> bool {
    matches!(c, '—' | '–' | '―' | '‒')
}

pub(crate) fn is_opening_quote(c: char) -> bool {
    matches!(c, '"' | '“' | '„' | '‟' | '«' | '‹' | '`' | '‘' | '‚' | '\'')
}

pub(crate) fn is_quote(c: char) -> bool {
    is_opening_quote(c) || matches!(c, '”' | '»' | '›' | '’')
}

pub(crate) fn is_word_boundary(c: char) -> bool {
    c.is_whitespace()
}
