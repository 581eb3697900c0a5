//! JSONL manifest of texts to analyse.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use punctum::corpus::decode;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    /// Text file, relative to the manifest.
    pub path: PathBuf,
    pub text_id: String,
    pub language_code: String,
    /// `original`, or `translation` for texts with `translation_of`.
    pub group: String,
    /// Half-open byte range `[start, end)` of the body within the file.
    #[serde(default)]
    pub body: Option<(usize, usize)>,
    #[serde(default)]
    pub translation_of: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Manifest {
    /// Records sorted by `text_id`.
    pub records: Vec<ManifestRecord>,
    base_dir: PathBuf,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let base_dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        Self::parse(&text, base_dir)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: ManifestRecord =
                serde_json::from_str(line).with_context(|| format!("manifest line {}", i + 1))?;
            records.push(rec);
        }
        records.sort_by(|a, b| a.text_id.cmp(&b.text_id));
        let m = Manifest { records, base_dir };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for r in &self.records {
            let valid_id = !r.text_id.is_empty()
                && r.text_id
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
            if !valid_id {
                bail!("text_id {:?} must be non-empty ASCII letters, digits, '_', '-' or '.'", r.text_id);
            }
            if !ids.insert(r.text_id.as_str()) {
                bail!("duplicate text_id {:?}", r.text_id);
            }
            if let Some((start, end)) = r.body {
                if start > end {
                    bail!("{}: body range {start}..{end} is reversed", r.text_id);
                }
            }
        }
        for r in &self.records {
            match (&r.translation_of, r.group.as_str()) {
                (Some(target), _) if !ids.contains(target.as_str()) => {
                    bail!("{}: translation_of {:?} is not in the manifest", r.text_id, target)
                }
                (Some(target), _) if target == &r.text_id => {
                    bail!("{}: a text cannot translate itself", r.text_id)
                }
                (None, g) if g != "original" => {
                    bail!("{}: group {:?} without translation_of", r.text_id, g)
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The UTF-8 body of a record.
    pub fn read_body(&self, rec: &ManifestRecord) -> Result<String> {
        let path = self.base_dir.join(&rec.path);
        let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let slice = match rec.body {
            None => &bytes[..],
            Some((start, end)) => bytes.get(start..end).ok_or_else(|| {
                anyhow!("body range {start}..{end} exceeds {} bytes of {}", bytes.len(), path.display())
            })?,
        };
        Ok(decode(slice)?.to_string())
    }
}
