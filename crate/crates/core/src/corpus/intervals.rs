use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tokenize::{Event, EventStream, MarkKind};
use crate::error::{Error, Result};

/// Which marks end an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PunctMode {
    /// Full stop, question mark, exclamation mark, ellipsis.
    #[serde(alias = "stops")]
    StopsOnly,
    /// Sentence ends plus commas.
    #[serde(alias = "stops_commas")]
    StopsAndCommas,
    /// All ten marks.
    #[serde(alias = "all")]
    AllMarks,
}

impl PunctMode {
    pub const ALL: [PunctMode; 3] = [PunctMode::StopsOnly, PunctMode::StopsAndCommas, PunctMode::AllMarks];

    pub fn selects(self, mark: MarkKind) -> bool {
        match self {
            PunctMode::StopsOnly => mark.is_sentence_end(),
            PunctMode::StopsAndCommas => mark.is_sentence_end() || mark == MarkKind::Comma,
            PunctMode::AllMarks => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PunctMode::StopsOnly => "stops",
            PunctMode::StopsAndCommas => "stops_commas",
            PunctMode::AllMarks => "all",
        }
    }
}

impl fmt::Display for PunctMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PunctMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "stops" | "stops_only" => Ok(PunctMode::StopsOnly),
            "stops_commas" | "stops_and_commas" => Ok(PunctMode::StopsAndCommas),
            "all" | "all_marks" => Ok(PunctMode::AllMarks),
            other => Err(Error::InvalidParams(format!("unknown punctuation mode {other:?}"))),
        }
    }
}

/// Word counts between consecutive selected marks of one text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSeries {
    text_id: String,
    mode: PunctMode,
    values: Vec<u64>,
}

impl IntervalSeries {
    pub fn new(text_id: impl Into<String>, mode: PunctMode, values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("interval series".into()));
        }
        if values.contains(&0) {
            return Err(Error::InvalidParams("interval lengths must be >= 1".into()));
        }
        Ok(IntervalSeries {
            text_id: text_id.into(),
            mode,
            values,
        })
    }

    pub fn text_id(&self) -> &str {
        &self.text_id
    }

    pub fn mode(&self) -> PunctMode {
        self.mode
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&k| k as f64).collect()
    }
}

/// Groups the words of a stream into intervals closed by selected marks.
/// Empty intervals (adjacent marks) are skipped and the trailing unterminated
/// run is discarded.
pub fn extract_segments(stream: &EventStream, mode: PunctMode) -> Vec<Vec<&str>> {
    let mut segments = Vec::new();
    let mut current = Vec::new();
    for event in &stream.events {
        match event {
            Event::Word(w) => current.push(w.as_str()),
            Event::Mark(m) if mode.selects(*m) => {
                if !current.is_empty() {
                    segments.push(std::mem::take(&mut current));
                }
            }
            Event::Mark(_) => {}
        }
    }
    segments
}

pub fn extract_intervals(
    stream: &EventStream,
    mode: PunctMode,
    text_id: &str,
) -> Result<IntervalSeries> {
    let values: Vec<u64> = extract_segments(stream, mode)
        .iter()
        .map(|s| s.len() as u64)
        .collect();
    if values.len() < 2 {
        return Err(Error::TextTooShort {
            text_id: text_id.to_string(),
            intervals: values.len(),
        });
    }
    IntervalSeries::new(text_id, mode, values)
}
