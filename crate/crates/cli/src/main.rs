//! `punctum`: interval statistics over a manifest of texts.

mod config;
mod manifest;
mod output;
mod pipeline;
mod sample;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use punctum::corpus::PunctMode;
use punctum::weibull::WeibullParams;

use crate::config::RunConfig;
use crate::manifest::Manifest;
use crate::output::OutDir;
use crate::pipeline::{Outcome, Run};

#[derive(Parser)]
#[command(name = "punctum", version, about = "Inter-punctuation interval statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSONL manifest of texts.
    #[arg(long)]
    manifest: PathBuf,
    /// TOML run configuration; defaults apply without it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory. Existing files in it are never overwritten.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated punctuation modes (stops, stops_commas, all).
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<PunctMode>>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit discrete Weibull distributions to every text and mode.
    Fit(Common),
    /// Detrended fluctuation analysis of every text (stops and all-marks modes).
    Dfa(Common),
    /// Cross-text report from earlier fit and dfa outputs.
    Report {
        #[command(flatten)]
        common: Common,
        /// Fit table; defaults to `<out>/fits.csv`.
        #[arg(long)]
        fits: Option<PathBuf>,
        /// DFA table; defaults to `<out>/dfa.csv` when it exists.
        #[arg(long)]
        dfa: Option<PathBuf>,
    },
    /// Write a synthetic text with discrete Weibull intervals and its manifest.
    Sample {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Read for the default seed.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        beta: f64,
        /// Number of intervals.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Long-memory target exponent in (0, 1); independent intervals without it.
        #[arg(long)]
        hurst: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "synthetic")]
        text_id: String,
        #[arg(long, default_value = "en")]
        language: String,
    },
}

fn setup(common: &Common) -> Result<(Run, PathBuf)> {
    let mut config = RunConfig::load(common.config.as_deref())?;
    if let Some(modes) = &common.modes {
        config.modes = modes.clone();
        config.modes.sort();
        config.modes.dedup();
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    config.validate()?;
    let out = common
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .context("no output directory: pass --out or set output_dir in the config")?;
    let manifest = Manifest::load(&common.manifest)?;
    Ok((Run::new(manifest, config, common.jobs)?, out))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Fit(common) => {
            let (run, out) = setup(&common)?;
            run.fit(&out)
        }
        Command::Dfa(common) => {
            let (run, out) = setup(&common)?;
            run.dfa(&out)
        }
        Command::Report { common, fits, dfa } => {
            let (run, out) = setup(&common)?;
            let fits = fits.unwrap_or_else(|| out.join("fits.csv"));
            let dfa = dfa.or_else(|| Some(out.join("dfa.csv")).filter(|p| p.exists()));
            run.report(&out, &fits, dfa.as_deref())
        }
        Command::Sample {
            out,
            config,
            p,
            beta,
            n,
            hurst,
            seed,
            text_id,
            language,
        } => {
            let cfg = RunConfig::load(config.as_deref())?;
            if n < 2 {
                bail!("--n must be at least 2");
            }
            let req = sample::SampleRequest {
                text_id,
                language_code: language,
                params: WeibullParams::new(p, beta)?,
                n,
                hurst,
                seed: seed.unwrap_or(cfg.seed),
            };
            sample::write(&OutDir::new(Path::new(&out))?, &req)?;
            Ok(Outcome { failures: 0 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(o) if o.failures == 0 => ExitCode::SUCCESS,
        Ok(o) => {
            eprintln!("punctum: {} text/mode unit(s) failed; see the *_errors.csv file", o.failures);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("punctum: {e:#}");
            ExitCode::FAILURE
        }
    }
}
