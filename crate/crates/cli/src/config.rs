//! Run configuration: a TOML file of analysis settings.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use punctum::corpus::{LangConfig, PunctMode, CORPUS_LANGUAGES};
use punctum::dfa::{DEFAULT_POLY_ORDER, DEFAULT_SCALE_COUNT, DEFAULT_S_MIN, MAX_POLY_ORDER, MIN_POLY_ORDER};
use punctum::weibull::FitOptions;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub modes: Vec<PunctMode>,
    pub seed: u64,
    /// Directory of `<language_code>.toml` preprocessing overrides, relative to the config file.
    pub lang_dir: Option<PathBuf>,
    /// Default output directory when `--out` is not given.
    pub output_dir: Option<PathBuf>,
    pub fit: FitSettings,
    pub dfa: DfaSettings,
    pub hazard: HazardSettings,
    pub isoline: IsolineSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSettings {
    pub xtol: f64,
    pub grid_points: usize,
    pub max_refinements: usize,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DfaSettings {
    pub poly_order: usize,
    pub s_min: usize,
    /// Upper scale; `None` means N/5 for each series.
    pub s_max: Option<usize>,
    pub scale_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HazardSettings {
    /// Range of the parametric averaged hazard.
    pub k: usize,
    /// Range of the empirical averaged hazard; `None` uses the floor of the reliability bound.
    pub empirical_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsolineSettings {
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            modes: PunctMode::ALL.to_vec(),
            seed: 0,
            lang_dir: None,
            output_dir: None,
            fit: FitSettings::default(),
            dfa: DfaSettings::default(),
            hazard: HazardSettings::default(),
            isoline: IsolineSettings::default(),
        }
    }
}

impl Default for FitSettings {
    fn default() -> Self {
        let o = FitOptions::default();
        FitSettings {
            xtol: o.xtol,
            grid_points: o.grid_points,
            max_refinements: o.max_refinements,
            max_iterations: o.max_iterations,
        }
    }
}

impl Default for DfaSettings {
    fn default() -> Self {
        DfaSettings {
            poly_order: DEFAULT_POLY_ORDER,
            s_min: DEFAULT_S_MIN,
            s_max: None,
            scale_count: DEFAULT_SCALE_COUNT,
        }
    }
}

impl Default for HazardSettings {
    fn default() -> Self {
        HazardSettings {
            k: punctum::aggregate::DEFAULT_HAZARD_K,
            empirical_k: None,
        }
    }
}

impl Default for IsolineSettings {
    fn default() -> Self {
        IsolineSettings {
            p_min: 0.01,
            p_max: 0.6,
            points: 60,
        }
    }
}

impl RunConfig {
    /// Reads a config file; `None` gives the defaults. `lang_dir` is made
    /// absolute against the file's directory.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let mut cfg: RunConfig =
                    toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                let dir = p.parent().unwrap_or_else(|| Path::new("."));
                cfg.lang_dir = cfg.lang_dir.map(|d| dir.join(d));
                cfg
            }
        };
        cfg.modes.sort();
        cfg.modes.dedup();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            bail!("no punctuation modes selected");
        }
        let f = &self.fit;
        if !(f.xtol > 0.0 && f.xtol < 1.0) || f.grid_points < 2 || f.max_refinements == 0 || f.max_iterations == 0 {
            bail!("fit settings out of range: {f:?}");
        }
        let d = &self.dfa;
        if !(MIN_POLY_ORDER..=MAX_POLY_ORDER).contains(&d.poly_order) {
            bail!("dfa.poly_order must be in {MIN_POLY_ORDER}..={MAX_POLY_ORDER}");
        }
        if d.s_min < d.poly_order + 2 || d.scale_count < 2 {
            bail!("dfa settings out of range: {d:?}");
        }
        if d.s_max.is_some_and(|m| m <= d.s_min) {
            bail!("dfa.s_max must exceed dfa.s_min");
        }
        if self.hazard.k == 0 || self.hazard.empirical_k == Some(0) {
            bail!("hazard ranges must be at least 1");
        }
        let i = &self.isoline;
        if !(i.p_min > 0.0 && i.p_min < i.p_max && i.p_max < 1.0) || i.points < 2 {
            bail!("isoline settings out of range: {i:?}");
        }
        Ok(())
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            xtol: self.fit.xtol,
            grid_points: self.fit.grid_points,
            max_refinements: self.fit.max_refinements,
            max_iterations: self.fit.max_iterations,
            ..FitOptions::default()
        }
    }

    pub fn isoline_grid(&self) -> Vec<f64> {
        let i = &self.isoline;
        (0..i.points)
            .map(|j| i.p_min + (i.p_max - i.p_min) * j as f64 / (i.points - 1) as f64)
            .collect()
    }

    /// Preprocessing configuration for a language: an override file from
    /// `lang_dir` when present, the bundled defaults otherwise.
    pub fn lang_config(&self, code: &str) -> Result<LangConfig> {
        if let Some(dir) = &self.lang_dir {
            let path = dir.join(format!("{code}.toml"));
            if path.exists() {
                let cfg = LangConfig::load(&path)?;
                if cfg.language_code() != code {
                    bail!("{} declares language {}", path.display(), cfg.language_code());
                }
                return Ok(cfg);
            }
        }
        Ok(LangConfig::builtin(code)?)
    }

    /// SHA-256 over the analysis settings and the preprocessing rules of
    /// every language. Output locations are left out so reruns into another
    /// directory carry the same fingerprint.
    pub fn fingerprint(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Canonical<'a> {
            modes: &'a [PunctMode],
            seed: u64,
            fit: &'a FitSettings,
            dfa: &'a DfaSettings,
            hazard: &'a HazardSettings,
            isoline: &'a IsolineSettings,
            languages: BTreeMap<String, (Vec<String>, [bool; 3])>,
        }
        let mut languages = BTreeMap::new();
        for code in CORPUS_LANGUAGES.iter().copied().chain(["other"]) {
            let lc = self.lang_config(code)?;
            let s = lc.strip();
            languages.insert(
                code.to_string(),
                (
                    lc.abbreviations().iter().cloned().collect(),
                    [s.quotation_dashes, s.inverted_marks, s.intraword_hyphens],
                ),
            );
        }
        let canonical = serde_json::to_string(&Canonical {
            modes: &self.modes,
            seed: self.seed,
            fit: &self.fit,
            dfa: &self.dfa,
            hazard: &self.hazard,
            isoline: &self.isoline,
            languages,
        })?;
        Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
    }
}
