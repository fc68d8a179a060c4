//! Experiment runner: configuration files, the five experiment suites, and
//! their CSV and JSON outputs.
//!
//! [`run_experiment`] is the single entry point. It runs the suite named in
//! the configuration, writes per-run CSV files into the output directory and
//! closes with `{experiment}_summary.json`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod records;
pub mod runs;
pub mod setup;
pub mod summary;

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use config::{parse_config, parse_config_for, ConfigError, ExperimentKind, RunConfig};
pub use error::RunError;
pub use summary::{Assertion, ExperimentSummary, SUMMARY_FORMAT};

use experiments::{run_constants, run_defocusing, run_dichotomy, run_far_center, run_single};
use records::{write_summary, write_table};
use summary::Timing;

pub const CONSTANTS_HEADER: &str = "# inls-lab constants v1";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

pub fn run_experiment(cfg: &RunConfig, out_dir: &Path) -> Result<ExperimentSummary, RunError> {
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut summary = ExperimentSummary {
        format: SUMMARY_FORMAT.into(),
        experiment: cfg.experiment.to_string(),
        seed: cfg.seed,
        sign: cfg.sign.to_string(),
        config: cfg.to_text(),
        runs: Vec::new(),
        bracket: None,
        constants: Vec::new(),
        sweep: Vec::new(),
        assertions: Vec::new(),
        notes: Vec::new(),
        timing: Timing { wall_seconds: 0.0, started_unix },
    };
    match cfg.experiment {
        ExperimentKind::Constants => {
            let o = run_constants(cfg)?;
            write_table(
                &out_dir.join("constants.csv"),
                CONSTANTS_HEADER,
                &[("seed", cfg.seed.to_string())],
                &["name", "measured", "exact", "relative_error", "tolerance", "passed"],
                o.rows.iter().map(|r| {
                    vec![
                        r.name.clone(),
                        format!("{:e}", r.measured),
                        opt(r.exact),
                        opt(r.relative_error),
                        opt(r.tolerance),
                        r.passed.to_string(),
                    ]
                }),
            )?;
            summary.constants = o.rows;
            summary.assertions = o.assertions;
        }
        ExperimentKind::Dichotomy => {
            let o = run_dichotomy(cfg, out_dir)?;
            summary.runs = o.runs;
            summary.bracket = Some(o.bracket);
            summary.assertions = o.assertions;
            summary.notes = o.notes;
        }
        ExperimentKind::Farcenter => {
            let o = run_far_center(cfg, out_dir)?;
            summary.sweep = o.rows;
            summary.assertions = o.assertions;
        }
        ExperimentKind::Defocusing => {
            let o = run_defocusing(cfg, out_dir)?;
            summary.runs = o.runs;
            summary.assertions = o.assertions;
        }
        ExperimentKind::SingleRun => {
            let o = run_single(cfg, out_dir)?;
            summary.runs = vec![o.run];
            summary.assertions = o.assertions;
        }
    }
    summary.timing.wall_seconds = started.elapsed().as_secs_f64();
    write_summary(&out_dir.join(format!("{}_summary.json", cfg.experiment.name())), &summary)?;
    Ok(summary)
}
