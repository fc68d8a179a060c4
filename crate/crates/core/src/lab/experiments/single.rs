use std::path::Path;

use crate::lab::config::{InitialData, RunConfig};
use crate::lab::error::RunError;
use crate::lab::runs::{run_case, Case};
use crate::lab::setup::{initial_field, spectral_grid, SpectralGrid};
use crate::lab::summary::{Assertion, RunVerdict};
use crate::solver::Status;
use crate::variational::Sign;

pub const MASS_TOLERANCE: f64 = 1e-8;
pub const ENERGY_TOLERANCE: f64 = 1e-6;
pub const VIRIAL_TOLERANCE: f64 = 0.03;
pub const COERCIVITY_SLACK: f64 = 1e-3;

pub struct SingleOutcome {
    pub run: RunVerdict,
    pub assertions: Vec<Assertion>,
}

pub fn run_single(cfg: &RunConfig, out_dir: &Path) -> Result<SingleOutcome, RunError> {
    let amplitude = match cfg.data {
        InitialData::Gaussian { amplitude, .. } => amplitude,
        InitialData::RescaledQ { factor, .. } => factor,
        InitialData::Samples { .. } => 1.0,
    };
    let case = Case {
        id: "single_run".into(),
        amplitude,
        direction: "forward",
        cfg,
        out_dir,
        virial_checks: cfg.params.virial_checks,
    };
    let run = match spectral_grid(&cfg.grid)? {
        SpectralGrid::Radial(g) => run_case(&case, initial_field(&cfg.data, g)?)?.0,
        SpectralGrid::Cartesian(g) => run_case(&case, initial_field(&cfg.data, g)?)?.0,
    };
    let mut assertions = vec![Assertion::new(
        "mass conserved",
        run.mass_drift < MASS_TOLERANCE,
        format!("relative drift {:e}", run.mass_drift),
    )];
    let resolved = run.status == Status::Dispersed.as_str() || run.status == Status::TimeExhausted.as_str();
    if resolved {
        assertions.push(Assertion::new(
            "energy conserved",
            run.energy_drift < ENERGY_TOLERANCE,
            format!("relative drift {:e}", run.energy_drift),
        ));
        for (w, err) in run.virial_errors.iter().enumerate() {
            let name = if w == 0 { "pure" } else { "localized" };
            assertions.push(Assertion::new(
                format!("virial time difference matches the rate ({name} weight)"),
                *err < VIRIAL_TOLERANCE,
                format!("worst relative error {err:e}"),
            ));
        }
    }
    if cfg.sign == Sign::Focusing && run.subthreshold_initial {
        assertions.push(Assertion::new(
            "kinetic energy stays below the threshold",
            run.kinetic_below_threshold,
            String::new(),
        ));
        assertions.push(Assertion::new(
            "coercivity margin holds along the flow",
            run.coercivity_slack >= -COERCIVITY_SLACK,
            format!("smallest slack {:e}", run.coercivity_slack),
        ));
    }
    Ok(SingleOutcome { run, assertions })
}
