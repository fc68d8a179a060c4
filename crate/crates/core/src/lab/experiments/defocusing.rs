use std::path::Path;

use crate::diagnostics::time_reversed;
use crate::grid_fields::{mass, ComplexField, SpectralDomain};
use crate::lab::config::{InitialData, RunConfig};
use crate::lab::error::RunError;
use crate::lab::runs::{run_case, Case, L10_SATURATION};
use crate::lab::setup::{initial_field, spectral_grid, step_params, SpectralGrid};
use crate::lab::summary::{Assertion, RunVerdict};
use crate::solver::{strang_step, SimulationState, Status};
use crate::variational::Sign;

/// Relative energy drift allowed in a defocusing run.
pub const ENERGY_TOLERANCE: f64 = 1e-3;
/// Relative L² mismatch allowed after a forward-then-reversed round trip.
pub const REVERSAL_TOLERANCE: f64 = 1e-8;

pub struct DefocusingOutcome {
    pub runs: Vec<RunVerdict>,
    pub assertions: Vec<Assertion>,
}

fn evolve<G: SpectralDomain<f64>>(
    u: ComplexField<f64, G>,
    cfg: &RunConfig,
    t: f64,
) -> Result<ComplexField<f64, G>, RunError> {
    let params = step_params(cfg, u.grid().as_ref())?;
    let steps = (t / params.dt()).ceil().max(1.0) as usize;
    let params = params.with_dt(t / steps as f64)?;
    let mut s = SimulationState::new(u);
    for _ in 0..steps {
        s = strang_step(s, &params);
    }
    Ok(s.into_field())
}

fn flip<G: SpectralDomain<f64>>(u: ComplexField<f64, G>, direction: &str) -> ComplexField<f64, G> {
    if direction == "backward" {
        time_reversed(&u)
    } else {
        u
    }
}

/// `‖conj(S_T conj(S_T u₀)) − u₀‖ / ‖u₀‖`, zero for an exactly reversible scheme.
fn reversal_error<G: SpectralDomain<f64>>(u0: ComplexField<f64, G>, cfg: &RunConfig, t: f64) -> Result<f64, RunError> {
    let forward = evolve(u0.clone(), cfg, t)?;
    let back = time_reversed(&evolve(time_reversed(&forward), cfg, t)?);
    Ok((mass(&back.sub(&u0)?) / mass(&u0)).sqrt())
}

pub fn run_defocusing(cfg: &RunConfig, out_dir: &Path) -> Result<DefocusingOutcome, RunError> {
    if cfg.sign != Sign::Defocusing {
        return Err(RunError::config("the defocusing suite needs sign = defocusing"));
    }
    let InitialData::Gaussian { width, .. } = cfg.data else {
        return Err(RunError::config("the defocusing suite needs the gaussian data family"));
    };
    let p = &cfg.params;
    let mut runs = Vec::new();
    let mut assertions = Vec::new();
    for (i, &amplitude) in p.amplitudes.iter().enumerate() {
        let chirp = p.chirps.get(i).copied().unwrap_or(0.0);
        let mut c = cfg.clone();
        c.data = InitialData::Gaussian { amplitude, width, center: [0.0; 3], chirp };
        for direction in ["forward", "backward"] {
            let id = format!("defocusing_{i}_{amplitude}_{direction}");
            let case = Case { id, amplitude, direction, cfg: &c, out_dir, virial_checks: p.virial_checks };
            let verdict = match spectral_grid(&c.grid)? {
                SpectralGrid::Radial(g) => run_case(&case, flip(initial_field(&c.data, g)?, direction))?.0,
                SpectralGrid::Cartesian(g) => run_case(&case, flip(initial_field(&c.data, g)?, direction))?.0,
            };
            let label = format!("amplitude {amplitude} chirp {chirp} {direction}");
            if verdict.status == Status::Underresolved.as_str() {
                assertions.push(Assertion::new(format!("{label}: underresolved, excluded"), true, verdict.id.clone()));
            } else {
                assertions.push(Assertion::new(
                    format!("{label}: dispersed with saturated L10"),
                    verdict.status == Status::Dispersed.as_str() && verdict.l10_late_growth < L10_SATURATION,
                    format!(
                        "status {}, deviation {:?}, late growth {:e}",
                        verdict.status, verdict.scatter_deviation, verdict.l10_late_growth
                    ),
                ));
                assertions.push(Assertion::new(
                    format!("{label}: energy conserved"),
                    verdict.energy_drift < ENERGY_TOLERANCE,
                    format!("relative drift {:e}", verdict.energy_drift),
                ));
            }
            runs.push(verdict);
        }
    }
    if let (Some(&amplitude), true) = (p.amplitudes.first(), p.reversal_time > 0.0) {
        let chirp = p.chirps.first().copied().unwrap_or(0.0);
        let data = InitialData::Gaussian { amplitude, width, center: [0.0; 3], chirp };
        let err = match spectral_grid(&cfg.grid)? {
            SpectralGrid::Radial(g) => reversal_error(initial_field(&data, g)?, cfg, p.reversal_time)?,
            SpectralGrid::Cartesian(g) => reversal_error(initial_field(&data, g)?, cfg, p.reversal_time)?,
        };
        assertions.push(Assertion::new(
            "time reversal of conjugated data retraces the forward run",
            err < REVERSAL_TOLERANCE,
            format!("relative L2 mismatch {err:e} over t = {}", p.reversal_time),
        ));
    }
    Ok(DefocusingOutcome { runs, assertions })
}
