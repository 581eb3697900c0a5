//! Append-only output files: every file is created fresh and never replaced.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    #[cfg(test)]
    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Fails if `rel` already exists.
    pub fn create(&self, rel: &str) -> Result<File> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .with_context(|| format!("creating {} (existing outputs are never overwritten)", path.display()))
    }

    pub fn write(&self, rel: &str, contents: &str) -> Result<()> {
        let mut f = self.create(rel)?;
        f.write_all(contents.as_bytes())
            .with_context(|| format!("writing {}", self.root.join(rel).display()))
    }

    /// Checks up front that none of `rels` exists, so a run does not stop
    /// half way through its outputs.
    pub fn ensure_absent(&self, rels: &[&str]) -> Result<()> {
        for rel in rels {
            let p = self.root.join(rel);
            if p.exists() {
                anyhow::bail!("{} already exists; choose a new output directory", p.display());
            }
        }
        Ok(())
    }
}

/// Serializes rows with a header into a string.
pub fn csv_string<T: serde::Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
