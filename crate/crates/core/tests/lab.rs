use std::path::PathBuf;

use inls_core::lab::config::{GridSpec, TimeStep};
use inls_core::lab::records::{read_records, read_summary};
use inls_core::lab::{parse_config_for, run_experiment, ExperimentKind, RunConfig, RunError};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inls-lab-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn small_single() -> RunConfig {
    let mut cfg = RunConfig::defaults(ExperimentKind::SingleRun);
    cfg.grid = GridSpec::Radial { points: 399, extent: 20.0 };
    cfg.time.t_final = 0.2;
    cfg.time.step = TimeStep::Cfl(0.5);
    cfg
}

#[test]
fn identical_config_gives_identical_csv() {
    let cfg = small_single();
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    run_experiment(&cfg, &a).unwrap();
    run_experiment(&cfg, &b).unwrap();
    let fa = std::fs::read(a.join("single_run.csv")).unwrap();
    let fb = std::fs::read(b.join("single_run.csv")).unwrap();
    assert!(!fa.is_empty());
    assert_eq!(fa, fb);
    assert!(String::from_utf8(fa).unwrap().starts_with("# inls-lab records v1\n"));
}

#[test]
fn summary_json_round_trips() {
    let cfg = small_single();
    let dir = scratch("summary");
    let summary = run_experiment(&cfg, &dir).unwrap();
    let back = read_summary(&dir.join("single-run_summary.json")).unwrap();
    assert_eq!(back, summary);
    let reparsed = parse_config_for(&summary.config, Some(ExperimentKind::SingleRun)).unwrap();
    assert_eq!(reparsed, cfg);
}

#[test]
fn verdict_rows_carry_tolerances_and_resolution() {
    let cfg = small_single();
    let dir = scratch("verdict");
    let summary = run_experiment(&cfg, &dir).unwrap();
    let run = &summary.runs[0];
    assert_eq!(run.points, 399);
    assert!(run.spacing > 0.0 && run.dt > 0.0);
    assert_eq!(run.growth_factor, cfg.detect.thresholds.growth_factor);
    assert_eq!(run.scatter_tolerance, cfg.detect.scatter.tolerance);
    let records = read_records(&dir.join(run.records.as_ref().unwrap())).unwrap();
    assert!(records.len() > 1);
    assert!(records.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn seeded_constants_are_reproducible() {
    let mut cfg = RunConfig::defaults(ExperimentKind::Constants);
    cfg.seed = 11;
    let a = run_experiment(&cfg, &scratch("seed-a")).unwrap();
    let b = run_experiment(&cfg, &scratch("seed-b")).unwrap();
    assert_eq!(a.constants, b.constants);
    assert!(a.passed());
}

#[test]
fn wrong_geometry_is_a_config_error() {
    let mut cfg = RunConfig::defaults(ExperimentKind::Farcenter);
    cfg.grid = GridSpec::Radial { points: 99, extent: 10.0 };
    assert!(matches!(run_experiment(&cfg, &scratch("geom")), Err(RunError::Config(_))));
}
