//! Running one configured trajectory and condensing it into a verdict row.

use std::path::Path;

use super::config::RunConfig;
use super::error::RunError;
use super::records::write_records;
use super::setup::step_params;
use super::summary::RunVerdict;
use crate::diagnostics::{run_trajectory, tightness_radius, Trajectory, TrajectoryOptions, VirialWeight};
use crate::grid_fields::{ComplexField, SpectralDomain};
use crate::ground_state::{kinetic_q, sharp_constant};
use crate::variational::subthreshold;

/// Share of the tightness integrals left outside the localized virial weight.
pub const TIGHTNESS_SHARE: f64 = 0.01;
/// Largest late-time share of the `L¹⁰` accumulator for a saturated run.
pub const L10_SATURATION: f64 = 0.01;

pub struct Case<'a> {
    pub id: String,
    pub amplitude: f64,
    pub direction: &'static str,
    pub cfg: &'a RunConfig,
    pub out_dir: &'a Path,
    pub virial_checks: bool,
}

pub fn run_case<G: SpectralDomain<f64>>(
    case: &Case<'_>,
    u0: ComplexField<f64, G>,
) -> Result<(RunVerdict, Trajectory<f64, G>), RunError> {
    let cfg = case.cfg;
    let grid = u0.grid().clone();
    let params = step_params(cfg, grid.as_ref())?;
    let radius = if u0.is_zero() { grid.extent() * 0.5 } else { tightness_radius(&u0, TIGHTNESS_SHARE) };
    let mut options = TrajectoryOptions::new(cfg.time.t_final);
    options.sample_every = ((cfg.time.sample_interval / params.dt()).round() as usize).max(1);
    options.thresholds = cfg.detect.thresholds;
    options.scatter = Some(cfg.detect.scatter);
    options.tightness_radius = radius;
    options.virial_checks = case.virial_checks;
    options.weights = if case.virial_checks {
        vec![VirialWeight::pure(), VirialWeight::localized(radius)?]
    } else {
        vec![VirialWeight::pure()]
    };
    let sub = subthreshold(&u0);
    let traj = run_trajectory(u0, &params, &options)?;

    let file = format!("{}.csv", case.id);
    let meta = [
        ("experiment", cfg.experiment.to_string()),
        ("run", case.id.clone()),
        ("sign", cfg.sign.to_string()),
        ("nodes", grid.len().to_string()),
        ("spacing", format!("{:e}", grid.spacing())),
        ("dt", format!("{:e}", traj.dt)),
        ("growth_factor", format!("{:e}", cfg.detect.thresholds.growth_factor)),
        ("spectral_fill", format!("{:e}", cfg.detect.thresholds.spectral_fill)),
        ("scatter_tolerance", format!("{:e}", cfg.detect.scatter.tolerance)),
        ("seed", cfg.seed.to_string()),
    ];
    write_records(&case.out_dir.join(&file), &meta, &traj.records)?;

    let k_q: f64 = kinetic_q();
    let c1: f64 = sharp_constant();
    let first = &traj.records[0];
    let drift = |f: &dyn Fn(&crate::diagnostics::DiagnosticsRecord) -> f64| {
        let base = f(first).abs();
        traj.records.iter().map(|r| (f(r) - f(first)).abs()).fold(0.0, f64::max) / if base > 0.0 { base } else { 1.0 }
    };
    let verdict = RunVerdict {
        id: case.id.clone(),
        amplitude: case.amplitude,
        direction: case.direction.to_string(),
        status: traj.status().to_string(),
        points: grid.len(),
        spacing: grid.spacing(),
        dt: traj.dt,
        t_final: cfg.time.t_final,
        t_end: traj.final_state.t(),
        growth_factor: cfg.detect.thresholds.growth_factor,
        spectral_fill: cfg.detect.thresholds.spectral_fill,
        scatter_tolerance: cfg.detect.scatter.tolerance,
        scatter_window: cfg.detect.scatter.window,
        max_growth: traj.max_growth,
        max_fill: traj.max_fill,
        scatter_deviation: traj.scatter.as_ref().map(|s| s.max_deviation),
        radiation_clean: traj.scatter.as_ref().map(|s| s.radiation_clean),
        l10_total: traj.l10.total(),
        l10_late_growth: traj.l10.late_growth(),
        subthreshold_initial: sub,
        kinetic_below_threshold: traj.records.iter().all(|r| r.kinetic < k_q),
        coercivity_slack: traj
            .records
            .iter()
            .map(|r| (r.kinetic - r.potential) - (1.0 - c1 * r.kinetic) * r.kinetic)
            .fold(f64::INFINITY, f64::min),
        mass_drift: drift(&|r| r.mass),
        energy_drift: drift(&|r| r.energy),
        virial_errors: traj
            .virial_checks
            .iter()
            .map(|c| c.iter().map(|v| v.relative_error()).fold(0.0, f64::max))
            .collect(),
        virial_radius: case.virial_checks.then_some(radius),
        records: Some(file),
    };
    Ok((verdict, traj))
}
