//! `shadowfid` command-line runner. Every verb reads a versioned JSON config
//! and writes CSV or JSON to `--out` (by extension) or stdout.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use shadowfid::bench::{self, ExperimentConfig};
use shadowfid::shadowmeas::{read_ndjson, write_ndjson};

#[derive(Parser)]
#[command(name = "shadowfid", version, about = "Fidelity estimation from local Pauli shadows")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (JSON with a `version` field).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; `.json` or `.csv` picks the format, otherwise stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "SHADOWFID_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Verb {
    /// Estimate fidelities of a lab state against its targets.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Report whether each estimate clears this value by 3 standard errors.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Shadow estimate vs exact fidelity vs linear XEB over a noise grid.
    BenchNoise(Common),
    /// Hamiltonian ground-state sweeps.
    HamPhase(Common),
    /// Mixing-time scaling table.
    Scaling(Common),
    /// Run the support and expansion check.
    GlepCheck(Common),
    /// Certify fidelity with a mixed target.
    MixedCert(Common),
    /// Write the lab state's measurement dataset as NDJSON.
    Sample(Common),
    /// Estimate against the config's targets from an existing dataset.
    Reuse {
        #[command(flatten)]
        common: Common,
        /// NDJSON dataset produced by `sample`.
        #[arg(long)]
        data: PathBuf,
    },
}

enum Format {
    Csv,
    Json,
}

fn format_of(out: Option<&Path>, default: Format) -> Format {
    match out.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ => default,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring thread pool")?;
    }
    let text = fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    let mut cfg = bench::parse_config(&text)?;
    if let Some(s) = common.seed {
        cfg.set_seed(s);
    }
    Ok(cfg)
}

fn expect_estimate(cfg: ExperimentConfig, verb: &str) -> Result<bench::EstimateConfig> {
    match cfg {
        ExperimentConfig::Estimate(c) => Ok(c),
        other => bail!("`{verb}` needs an `estimate` config, got `{}`", other.name()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.verb {
        Verb::Estimate { common, threshold } => {
            let mut cfg = expect_estimate(load(&common)?, "estimate")?;
            if threshold.is_some() {
                cfg.threshold = threshold;
            }
            emit(common.out.as_deref(), &json(&bench::run_estimate(&cfg)?)?)
        }
        Verb::BenchNoise(common) => {
            let ExperimentConfig::BenchmarkNoise(cfg) = load(&common)? else {
                bail!("`bench-noise` needs a `benchmark-noise` config");
            };
            let rows = bench::run_benchmark_noise(&cfg)?;
            let text = match format_of(common.out.as_deref(), Format::Csv) {
                Format::Csv => bench::bench_csv(&rows),
                Format::Json => json(&rows)?,
            };
            emit(common.out.as_deref(), &text)
        }
        Verb::HamPhase(common) => {
            let ExperimentConfig::HamiltonianPhase(cfg) = load(&common)? else {
                bail!("`ham-phase` needs a `hamiltonian-phase` config");
            };
            let rows = bench::run_hamiltonian_phase(&cfg)?;
            let text = match format_of(common.out.as_deref(), Format::Csv) {
                Format::Csv => bench::ham_csv(&rows),
                Format::Json => json(&rows)?,
            };
            emit(common.out.as_deref(), &text)
        }
        Verb::Scaling(common) => {
            let ExperimentConfig::Scaling(cfg) = load(&common)? else {
                bail!("`scaling` needs a `scaling` config");
            };
            let table = bench::run_scaling(&cfg)?;
            let text = match format_of(common.out.as_deref(), Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => json(&table)?,
            };
            emit(common.out.as_deref(), &text)
        }
        Verb::GlepCheck(common) => {
            let ExperimentConfig::Glep(cfg) = load(&common)? else {
                bail!("`glep-check` needs a `glep` config");
            };
            emit(common.out.as_deref(), &json(&bench::run_glep(&cfg)?)?)
        }
        Verb::MixedCert(common) => {
            let ExperimentConfig::MixedCert(cfg) = load(&common)? else {
                bail!("`mixed-cert` needs a `mixed-cert` config");
            };
            emit(common.out.as_deref(), &json(&bench::run_mixed(&cfg)?)?)
        }
        Verb::Sample(common) => {
            let cfg = expect_estimate(load(&common)?, "sample")?;
            let (_, records) = bench::sample_dataset(&cfg)?;
            let mut buf = Vec::new();
            write_ndjson(&records, &mut buf)?;
            emit(common.out.as_deref(), std::str::from_utf8(&buf)?)
        }
        Verb::Reuse { common, data } => {
            let cfg = expect_estimate(load(&common)?, "reuse")?;
            let file = fs::File::open(&data).with_context(|| format!("opening {}", data.display()))?;
            let records = read_ndjson(BufReader::new(file))?;
            let rep = bench::estimate_targets(&cfg, &records, None)?;
            emit(common.out.as_deref(), &json(&rep)?)
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
