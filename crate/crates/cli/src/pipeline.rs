//! The fit, dfa and report runs over a manifest.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use log::{info, warn};
use punctum::aggregate::{
    average_hazard_empirical, average_hazard_parametric, empirical_hazard, hurst_scatter, isoline,
    reliability_bound, summarize_language, translation_shift, LanguageSummary, TranslationPair,
};
use punctum::corpus::{intervals_from_text, PunctMode};
use punctum::dfa::{compute_fluctuation, default_scales, fit_scaling, Regime};
use punctum::plots::{rescale_plot, weibull_plot};
use punctum::weibull::{fit_mle_with, WeibullParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::manifest::{Manifest, ManifestRecord};
use crate::output::{csv_string, OutDir};

pub const SCHEMA_VERSION: u32 = 1;

pub const FIT_HEADER: [&str; 11] = [
    "text_id",
    "language_code",
    "mode",
    "p",
    "beta",
    "log_likelihood",
    "ff_rmse",
    "n",
    "converged",
    "at_bound",
    "config_fingerprint",
];

pub const DFA_HEADER: [&str; 15] = [
    "text_id",
    "language_code",
    "mode",
    "regime",
    "hurst",
    "intercept",
    "hurst_small",
    "hurst_large",
    "crossover_scale",
    "rmse",
    "n",
    "s_min",
    "s_max",
    "poly_order",
    "config_fingerprint",
];

const ERROR_HEADER: [&str; 4] = ["text_id", "mode", "error", "config_fingerprint"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub text_id: String,
    pub language_code: String,
    pub mode: String,
    pub p: f64,
    pub beta: f64,
    pub log_likelihood: f64,
    pub ff_rmse: f64,
    pub n: usize,
    pub converged: bool,
    pub at_bound: bool,
    pub config_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaRow {
    pub text_id: String,
    pub language_code: String,
    pub mode: String,
    pub regime: String,
    pub hurst: Option<f64>,
    pub intercept: Option<f64>,
    pub hurst_small: Option<f64>,
    pub hurst_large: Option<f64>,
    pub crossover_scale: Option<f64>,
    pub rmse: f64,
    pub n: usize,
    pub s_min: usize,
    pub s_max: usize,
    pub poly_order: usize,
    pub config_fingerprint: String,
}

impl DfaRow {
    fn regime(&self) -> Option<Regime> {
        match self.regime.as_str() {
            "single" => Some(Regime::Single {
                hurst: self.hurst?,
                intercept: self.intercept?,
                rmse: self.rmse,
            }),
            "double" => Some(Regime::Double {
                hurst_small: self.hurst_small?,
                hurst_large: self.hurst_large?,
                crossover_scale: self.crossover_scale?,
                rmse: self.rmse,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ErrorRow {
    text_id: String,
    mode: String,
    error: String,
    config_fingerprint: String,
}

/// Settings shared by every run.
pub struct Run {
    pub manifest: Manifest,
    pub config: RunConfig,
    pub fingerprint: String,
    pool: rayon::ThreadPool,
}

/// How many (text, mode) units failed.
pub struct Outcome {
    pub failures: usize,
}

enum Unit<T> {
    Done(T),
    Failed(ErrorRow),
}

impl Run {
    pub fn new(manifest: Manifest, config: RunConfig, jobs: usize) -> Result<Self> {
        let fingerprint = config.fingerprint()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building worker pool")?;
        Ok(Run {
            manifest,
            config,
            fingerprint,
            pool,
        })
    }

    fn failed(&self, text_id: &str, mode: &str, err: impl std::fmt::Display) -> ErrorRow {
        ErrorRow {
            text_id: text_id.to_string(),
            mode: mode.to_string(),
            error: err.to_string(),
            config_fingerprint: self.fingerprint.clone(),
        }
    }

    /// Interval series of one text per mode; a read failure fails every mode.
    fn series_for(
        &self,
        rec: &ManifestRecord,
        modes: &[PunctMode],
    ) -> Vec<(PunctMode, Result<Vec<u64>, String>)> {
        let prepared = self
            .manifest
            .read_body(rec)
            .and_then(|body| Ok((body, self.config.lang_config(&rec.language_code)?)));
        modes
            .iter()
            .map(|&mode| {
                let r = match &prepared {
                    Err(e) => Err(format!("{e:#}")),
                    Ok((body, lang)) => intervals_from_text(body, lang, &rec.text_id, mode)
                        .map(|s| s.values().to_vec())
                        .map_err(|e| e.to_string()),
                };
                (mode, r)
            })
            .collect()
    }

    /// Runs `work` on every text in parallel; results come back in `text_id` order.
    fn per_text<T: Send>(&self, work: impl Fn(&ManifestRecord) -> Vec<Unit<T>> + Sync) -> Vec<Unit<T>> {
        self.pool.install(|| {
            self.manifest
                .records
                .par_iter()
                .map(&work)
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        })
    }

    fn write_errors(&self, out: &OutDir, name: &str, errors: &[ErrorRow]) -> Result<()> {
        for e in errors {
            warn!("{} [{}]: {}", e.text_id, e.mode, e.error);
        }
        out.write(name, &csv_string(errors, &ERROR_HEADER)?)
    }

    /// One fit row and one rescaled Weibull plot per (text, mode).
    pub fn fit(&self, out_dir: &Path) -> Result<Outcome> {
        let out = OutDir::new(out_dir)?;
        out.ensure_absent(&["fits.csv", "fit_errors.csv", "plots"])?;
        let opts = self.config.fit_options();
        let units = self.per_text(|rec| {
            self.series_for(rec, &self.config.modes)
                .into_iter()
                .map(|(mode, series)| {
                    let fitted = series.and_then(|s| {
                        let fit = fit_mle_with(&s, &opts).map_err(|e| e.to_string())?;
                        let plot = weibull_plot(&s, &fit.params).and_then(|p| rescale_plot(&p));
                        if let Err(e) = &plot {
                            warn!("{} [{}]: no plot: {e}", rec.text_id, mode);
                        }
                        Ok((fit, plot.ok()))
                    });
                    match fitted {
                        Err(e) => Unit::Failed(self.failed(&rec.text_id, mode.as_str(), e)),
                        Ok((fit, plot)) => {
                            let row = FitRow {
                                text_id: rec.text_id.clone(),
                                language_code: rec.language_code.clone(),
                                mode: mode.as_str().to_string(),
                                p: fit.params.p(),
                                beta: fit.params.beta(),
                                log_likelihood: fit.log_likelihood,
                                ff_rmse: fit.ff_rmse,
                                n: fit.n,
                                converged: fit.converged,
                                at_bound: fit.at_bound,
                                config_fingerprint: self.fingerprint.clone(),
                            };
                            let csv = plot
                                .map(|p| format!("# config_fingerprint={}\n{}", self.fingerprint, p.to_csv()));
                            Unit::Done((row, csv))
                        }
                    }
                })
                .collect()
        });

        let mut rows = Vec::new();
        let mut errors = Vec::new();
        for u in units {
            match u {
                Unit::Done((row, plot)) => {
                    if let Some(plot) = plot {
                        out.write(&format!("plots/{}_{}.csv", row.text_id, row.mode), &plot)?;
                    }
                    rows.push(row);
                }
                Unit::Failed(e) => errors.push(e),
            }
        }
        info!("fits.csv: {} rows, {} failed units", rows.len(), errors.len());
        out.write("fits.csv", &csv_string(&rows, &FIT_HEADER)?)?;
        self.write_errors(&out, "fit_errors.csv", &errors)?;
        Ok(Outcome {
            failures: errors.len(),
        })
    }

    /// One DFA row and fluctuation curve per (text, mode) for the stops-only
    /// and all-marks modes that are selected.
    pub fn dfa(&self, out_dir: &Path) -> Result<Outcome> {
        let out = OutDir::new(out_dir)?;
        out.ensure_absent(&["dfa.csv", "dfa_errors.csv", "curves"])?;
        let modes: Vec<PunctMode> = self
            .config
            .modes
            .iter()
            .copied()
            .filter(|m| matches!(m, PunctMode::StopsOnly | PunctMode::AllMarks))
            .collect();
        let d = &self.config.dfa;
        let units = self.per_text(|rec| {
            self.series_for(rec, &modes)
                .into_iter()
                .map(|(mode, series)| {
                    let analysed = series.and_then(|s| {
                        let x: Vec<f64> = s.iter().map(|&v| v as f64).collect();
                        let mut scales =
                            default_scales(x.len(), d.s_min, d.scale_count).map_err(|e| e.to_string())?;
                        if let Some(cap) = d.s_max {
                            scales.retain(|&s| s <= cap);
                        }
                        let curve = compute_fluctuation(&x, &scales, d.poly_order).map_err(|e| e.to_string())?;
                        if curve.is_degenerate() {
                            return Err("degenerate series: zero fluctuation after detrending".to_string());
                        }
                        fit_scaling(&curve).map_err(|e| e.to_string())
                    });
                    match analysed {
                        Err(e) => Unit::Failed(self.failed(&rec.text_id, mode.as_str(), e)),
                        Ok(result) => {
                            let c = &result.curve;
                            let mut row = DfaRow {
                                text_id: rec.text_id.clone(),
                                language_code: rec.language_code.clone(),
                                mode: mode.as_str().to_string(),
                                regime: result.regime.kind().to_string(),
                                hurst: None,
                                intercept: None,
                                hurst_small: None,
                                hurst_large: None,
                                crossover_scale: None,
                                rmse: result.regime.rmse(),
                                n: c.n,
                                s_min: c.scales[0],
                                s_max: c.scales[c.scales.len() - 1],
                                poly_order: c.poly_order,
                                config_fingerprint: self.fingerprint.clone(),
                            };
                            match result.regime {
                                Regime::Single { hurst, intercept, .. } => {
                                    row.hurst = Some(hurst);
                                    row.intercept = Some(intercept);
                                }
                                Regime::Double {
                                    hurst_small,
                                    hurst_large,
                                    crossover_scale,
                                    ..
                                } => {
                                    row.hurst_small = Some(hurst_small);
                                    row.hurst_large = Some(hurst_large);
                                    row.crossover_scale = Some(crossover_scale);
                                }
                            }
                            let csv = format!("# config_fingerprint={}\n{}", self.fingerprint, c.to_csv());
                            Unit::Done((row, csv))
                        }
                    }
                })
                .collect()
        });

        let mut rows = Vec::new();
        let mut errors = Vec::new();
        for u in units {
            match u {
                Unit::Done((row, curve)) => {
                    out.write(&format!("curves/{}_{}.csv", row.text_id, row.mode), &curve)?;
                    rows.push(row);
                }
                Unit::Failed(e) => errors.push(e),
            }
        }
        info!("dfa.csv: {} rows, {} failed units", rows.len(), errors.len());
        out.write("dfa.csv", &csv_string(&rows, &DFA_HEADER)?)?;
        self.write_errors(&out, "dfa_errors.csv", &errors)?;
        Ok(Outcome {
            failures: errors.len(),
        })
    }

    /// Language summaries, isolines, averaged hazards, Hurst scatter and
    /// translation shifts, written under `<out>/report/`.
    pub fn report(&self, out_dir: &Path, fits_path: &Path, dfa_path: Option<&Path>) -> Result<Outcome> {
        let out = OutDir::new(&out_dir.join("report"))?;
        out.ensure_absent(&[
            "summaries.json",
            "hazard_parametric.csv",
            "hazard_empirical.csv",
            "isolines.csv",
            "hurst_scatter.csv",
            "translation_shift.json",
        ])?;
        let fits: Vec<FitRow> = read_csv(fits_path)?;
        if fits.is_empty() {
            anyhow::bail!("{} has no rows", fits_path.display());
        }
        let stale = fits.iter().filter(|r| r.config_fingerprint != self.fingerprint).count();
        if stale > 0 {
            warn!("{stale} fit rows were produced under a different configuration");
        }
        let all_fits: BTreeMap<&str, &FitRow> = fits
            .iter()
            .filter(|r| r.mode == PunctMode::AllMarks.as_str())
            .map(|r| (r.text_id.as_str(), r))
            .collect();
        let to_result = |r: &FitRow| -> Result<punctum::weibull::FitResult> {
            Ok(punctum::weibull::FitResult {
                params: WeibullParams::new(r.p, r.beta)?,
                log_likelihood: r.log_likelihood,
                ff_rmse: r.ff_rmse,
                n: r.n,
                converged: r.converged,
                at_bound: r.at_bound,
            })
        };

        let mut by_language: BTreeMap<&str, Vec<&ManifestRecord>> = BTreeMap::new();
        for rec in &self.manifest.records {
            if rec.translation_of.is_none() && all_fits.contains_key(rec.text_id.as_str()) {
                by_language.entry(rec.language_code.as_str()).or_default().push(rec);
            }
        }

        let fp = &self.fingerprint;
        let mut summaries: Vec<LanguageReport> = Vec::new();
        let mut skipped = Vec::new();
        let mut param_rows = Vec::new();
        let mut emp_rows = Vec::new();
        let mut iso_rows = Vec::new();
        for (lang, recs) in &by_language {
            if recs.len() < 2 {
                warn!("language {lang}: {} original text(s) with fits, need 2; skipped", recs.len());
                skipped.push(SkippedLanguage {
                    language_code: lang.to_string(),
                    n_texts: recs.len(),
                });
                continue;
            }
            let lang_fits = recs
                .iter()
                .map(|r| to_result(all_fits[r.text_id.as_str()]))
                .collect::<Result<Vec<_>>>()?;
            let mut summary = summarize_language(lang, &lang_fits)?;

            let series: Vec<Vec<u64>> = self.pool.install(|| {
                recs.par_iter()
                    .map(|r| self.series_for(r, &[PunctMode::AllMarks]).remove(0).1)
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .zip(recs.iter())
            .filter_map(|(s, r)| match s {
                Ok(s) => Some(s),
                Err(e) => {
                    warn!("{}: intervals unavailable for the report: {e}", r.text_id);
                    None
                }
            })
            .collect();
            let reliability = if series.is_empty() { None } else { Some(reliability_bound(&series)?) };
            summary.reliability_k = reliability;

            let k_param = self.config.hazard.k;
            let param = average_hazard_parametric(&lang_fits, k_param)?;
            for k in 1..=k_param {
                param_rows.push(HazardRow::new(lang, k, param.get(k), fp));
            }
            let k_emp = self
                .config
                .hazard
                .empirical_k
                .or(reliability.map(|r| (r.floor() as usize).max(1)));
            if let Some(k_emp) = k_emp.filter(|_| !series.is_empty()) {
                let curves: Vec<_> = series.iter().map(|s| empirical_hazard(s, k_emp)).collect();
                let avg = average_hazard_empirical(&curves, k_emp)?;
                for k in 1..=k_emp {
                    emp_rows.push(HazardRow::new(lang, k, avg.get(k), fp));
                }
            }

            let centroid = WeibullParams::new(summary.mean_p, summary.mean_beta)?;
            let expected = centroid.expected_value();
            match isoline(expected, &self.config.isoline_grid()) {
                Ok(points) => iso_rows.extend(points.iter().map(|w| IsolineRow {
                    language_code: lang.to_string(),
                    expected,
                    p: w.p(),
                    beta: w.beta(),
                    config_fingerprint: fp.clone(),
                })),
                Err(e) => warn!("language {lang}: no isoline through the centroid: {e}"),
            }
            summaries.push(LanguageReport {
                expected_value: expected,
                hazard_k: k_param,
                empirical_hazard_k: k_emp,
                summary,
            });
        }

        let bundle = SummaryBundle {
            schema_version: SCHEMA_VERSION,
            config_fingerprint: fp.clone(),
            percentile_rule: "nearest-rank 95th percentile per text, averaged over texts".into(),
            languages: summaries,
            skipped_languages: skipped,
        };
        out.write("summaries.json", &(serde_json::to_string_pretty(&bundle)? + "\n"))?;
        out.write(
            "hazard_parametric.csv",
            &csv_string(&param_rows, &["language_code", "k", "h", "config_fingerprint"])?,
        )?;
        out.write(
            "hazard_empirical.csv",
            &csv_string(&emp_rows, &["language_code", "k", "h", "config_fingerprint"])?,
        )?;
        out.write(
            "isolines.csv",
            &csv_string(&iso_rows, &["language_code", "expected", "p", "beta", "config_fingerprint"])?,
        )?;

        if let Some(path) = dfa_path {
            let dfa: Vec<DfaRow> = read_csv(path)?;
            let mut regimes: BTreeMap<&str, (Option<Regime>, Option<Regime>)> = BTreeMap::new();
            for r in &dfa {
                let slot = regimes.entry(r.text_id.as_str()).or_default();
                if r.mode == PunctMode::StopsOnly.as_str() {
                    slot.0 = r.regime();
                } else if r.mode == PunctMode::AllMarks.as_str() {
                    slot.1 = r.regime();
                }
            }
            let pairs: Vec<(String, Regime, Regime)> = regimes
                .into_iter()
                .filter_map(|(id, (s, a))| Some((id.to_string(), s?, a?)))
                .collect();
            match hurst_scatter(&pairs) {
                Ok(scatter) => {
                    let header = format!(
                        "# config_fingerprint={fp}\n# slope={} intercept={} rss={}\n# mean_h_stops={} mean_h_all={}\n# excluded={}\n",
                        scatter.line.slope,
                        scatter.line.intercept,
                        scatter.line.rss,
                        scatter.mean_h_stops,
                        scatter.mean_h_all,
                        scatter.excluded.join(";")
                    );
                    out.write("hurst_scatter.csv", &(header + &scatter.to_csv()))?;
                }
                Err(e) => warn!("no Hurst scatter: {e}"),
            }
        }

        let pairs: Vec<TranslationPair> = self
            .manifest
            .records
            .iter()
            .filter_map(|rec| {
                let orig = rec.translation_of.as_deref()?;
                let (o, t) = (all_fits.get(orig)?, all_fits.get(rec.text_id.as_str())?);
                Some(TranslationPair {
                    original_text_id: orig.to_string(),
                    translated_text_id: rec.text_id.clone(),
                    target_language: rec.language_code.clone(),
                    original: WeibullParams::new(o.p, o.beta).ok()?,
                    translated: WeibullParams::new(t.p, t.beta).ok()?,
                })
            })
            .collect();
        if !pairs.is_empty() {
            let by_code: BTreeMap<&str, &LanguageSummary> = bundle
                .languages
                .iter()
                .map(|l| (l.summary.language_code.as_str(), &l.summary))
                .collect();
            let report = translation_shift(&pairs, |code| by_code.get(code).map(|s| (*s).clone()))?;
            let wrapped = ShiftBundle {
                schema_version: SCHEMA_VERSION,
                config_fingerprint: fp.clone(),
                report,
            };
            out.write("translation_shift.json", &(serde_json::to_string_pretty(&wrapped)? + "\n"))?;
        }
        Ok(Outcome { failures: 0 })
    }
}

#[derive(Serialize)]
struct HazardRow {
    language_code: String,
    k: usize,
    h: Option<f64>,
    config_fingerprint: String,
}

impl HazardRow {
    fn new(lang: &str, k: usize, h: Option<f64>, fp: &str) -> Self {
        HazardRow {
            language_code: lang.to_string(),
            k,
            h,
            config_fingerprint: fp.to_string(),
        }
    }
}

#[derive(Serialize)]
struct IsolineRow {
    language_code: String,
    expected: f64,
    p: f64,
    beta: f64,
    config_fingerprint: String,
}

#[derive(Serialize)]
struct LanguageReport {
    #[serde(flatten)]
    summary: LanguageSummary,
    /// Expected interval length at the centroid; the isoline passes through it.
    expected_value: f64,
    hazard_k: usize,
    empirical_hazard_k: Option<usize>,
}

#[derive(Serialize)]
struct SkippedLanguage {
    language_code: String,
    n_texts: usize,
}

#[derive(Serialize)]
struct SummaryBundle {
    schema_version: u32,
    config_fingerprint: String,
    percentile_rule: String,
    languages: Vec<LanguageReport>,
    skipped_languages: Vec<SkippedLanguage>,
}

#[derive(Serialize)]
struct ShiftBundle {
    schema_version: u32,
    config_fingerprint: String,
    #[serde(flatten)]
    report: punctum::aggregate::ShiftReport,
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .map(|row| row.with_context(|| format!("parsing {}", path.display())))
        .collect()
}
