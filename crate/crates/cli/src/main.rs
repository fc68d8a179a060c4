//! `inls-lab`: runs one experiment suite and reports its assertions.
//!
//! Exit status is 0 when every assertion passes, 1 when at least one fails
//! and 2 when the configuration or the output directory cannot be used.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use inls_core::lab::{parse_config_for, run_experiment, ExperimentKind, ExperimentSummary, RunConfig};

#[derive(Parser)]
#[command(name = "inls-lab", version, about = "Experiments for the energy-critical inhomogeneous NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state constants, ascent estimate, residual orders and Hardy ratios.
    Constants(Common),
    /// Bracket the scattering/blowup transition along a Gaussian family.
    Dichotomy(Common),
    /// Nonlinear deviation as the profile center moves away from the origin.
    Farcenter(Common),
    /// Defocusing scattering, forward and backward in time.
    Defocusing(Common),
    /// One trajectory with conservation and virial checks.
    SingleRun(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file (`key = value` lines grouped in `[sections]`).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output` from the configuration.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Multiply the grid resolution by this factor.
    #[arg(long, value_name = "FACTOR")]
    resolution_scale: Option<f64>,
    /// Seed for the randomized checks.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

impl Command {
    fn split(self) -> (ExperimentKind, Common) {
        match self {
            Command::Constants(c) => (ExperimentKind::Constants, c),
            Command::Dichotomy(c) => (ExperimentKind::Dichotomy, c),
            Command::Farcenter(c) => (ExperimentKind::Farcenter, c),
            Command::Defocusing(c) => (ExperimentKind::Defocusing, c),
            Command::SingleRun(c) => (ExperimentKind::SingleRun, c),
        }
    }
}

fn load(kind: ExperimentKind, common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config_for(&text, Some(kind)).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::defaults(kind),
    };
    if let Some(f) = common.resolution_scale {
        cfg = cfg.with_resolution_scale(f).context("applying --resolution-scale")?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

fn report(summary: &ExperimentSummary) {
    for run in &summary.runs {
        println!("run {:<40} {:<17} t = {:.4}", run.id, run.status, run.t_end);
    }
    if let Some(b) = &summary.bracket {
        println!("bracket [{}, {}] width {:.3e} after {} bisections", b.low, b.high, b.width, b.bisections);
    }
    for row in &summary.constants {
        println!("constant {:<24} {:.9e}", row.name, row.measured);
    }
    for row in &summary.sweep {
        let dev = row.deviation.map_or_else(|| "-".to_string(), |d| format!("{d:.4e}"));
        println!("center {:<8} deviation {dev}", row.center);
    }
    for note in &summary.notes {
        println!("note: {note}");
    }
    for a in &summary.assertions {
        let tag = if a.passed { "PASS" } else { "FAIL" };
        if a.detail.is_empty() {
            println!("{tag} {}", a.name);
        } else {
            println!("{tag} {} ({})", a.name, a.detail);
        }
    }
    println!("{} finished in {:.1} s", summary.experiment, summary.timing.wall_seconds);
}

fn run(kind: ExperimentKind, common: Common) -> Result<ExperimentSummary> {
    let cfg = load(kind, &common)?;
    let summary = run_experiment(&cfg, &cfg.output)?;
    Ok(summary)
}

fn main() -> ExitCode {
    let (kind, common) = Cli::parse().command.split();
    match run(kind, common) {
        Ok(summary) => {
            report(&summary);
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
