//! Synthetic texts with known interval statistics.

use std::fmt::Write as _;

use anyhow::Result;
use punctum::surrogate::weibull_intervals;
use punctum::weibull::{sample, WeibullParams};
use serde::Serialize;

use crate::output::OutDir;

const WORDS: [&str; 12] = [
    "alder", "birch", "cedar", "elm", "fir", "hazel", "larch", "maple", "oak", "pine", "rowan", "willow",
];

pub struct SampleRequest {
    pub text_id: String,
    pub language_code: String,
    pub params: WeibullParams,
    pub n: usize,
    /// Long-memory target; `None` draws independent intervals.
    pub hurst: Option<f64>,
    pub seed: u64,
}

/// Interval lengths for the request.
pub fn intervals(req: &SampleRequest) -> Result<Vec<u64>> {
    Ok(match req.hurst {
        None => sample(&req.params, req.n, req.seed),
        Some(h) => weibull_intervals(&req.params, req.n, h, req.seed)?,
    })
}

/// Text whose full-stop intervals are exactly `lengths`, ten sentences per line.
pub fn render(lengths: &[u64]) -> String {
    let mut out = String::new();
    let mut w = 0usize;
    for (i, &k) in lengths.iter().enumerate() {
        for j in 0..k {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(WORDS[w % WORDS.len()]);
            w += 1;
        }
        out.push('.');
        out.push(if i % 10 == 9 { '\n' } else { ' ' });
    }
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Record<'a> {
    path: String,
    text_id: &'a str,
    language_code: &'a str,
    group: &'a str,
}

/// Writes `<text_id>.txt`, `<text_id>_intervals.csv` and a one-line `manifest.jsonl`.
pub fn write(out: &OutDir, req: &SampleRequest) -> Result<()> {
    let lengths = intervals(req)?;
    let txt = format!("{}.txt", req.text_id);
    out.ensure_absent(&[&txt, "manifest.jsonl"])?;
    let mut csv = String::from("k\n");
    for k in &lengths {
        let _ = writeln!(csv, "{k}");
    }
    out.write(&txt, &render(&lengths))?;
    out.write(&format!("{}_intervals.csv", req.text_id), &csv)?;
    let rec = Record {
        path: txt,
        text_id: &req.text_id,
        language_code: &req.language_code,
        group: "original",
    };
    out.write("manifest.jsonl", &(serde_json::to_string(&rec)? + "\n"))
}
