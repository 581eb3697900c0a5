//! Statistics of the gaps between punctuation marks in written text.
//!
//! The crate turns a text into a series of word counts between consecutive
//! punctuation marks ([`corpus`]), models those counts with the discrete
//! Weibull distribution ([`weibull`]), draws Weibull plots ([`plots`]),
//! measures long-range correlations with detrended fluctuation analysis
//! ([`dfa`]) and aggregates many texts into per-language summaries
//! ([`aggregate`]).

pub mod aggregate;
pub mod corpus;
pub mod dfa;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod plots;
pub mod surrogate;
pub mod weibull;

pub use error::{Error, Result};
