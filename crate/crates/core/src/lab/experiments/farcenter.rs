use std::path::Path;

use rayon::prelude::*;

use crate::diagnostics::{far_center_deviation, FarCenterSpec};
use crate::lab::config::{InitialData, RunConfig};
use crate::lab::error::RunError;
use crate::lab::records::write_table;
use crate::lab::setup::{spectral_grid, step_params, SpectralGrid};
use crate::lab::summary::{Assertion, SweepRow};

pub const FARCENTER_HEADER: &str = "# inls-lab farcenter v1";
/// Largest ratio between the deviation at the farthest center and at the origin.
pub const FAR_RATIO: f64 = 0.25;

pub struct FarCenterOutcome {
    pub rows: Vec<SweepRow>,
    pub assertions: Vec<Assertion>,
}

pub fn run_far_center(cfg: &RunConfig, out_dir: &Path) -> Result<FarCenterOutcome, RunError> {
    let SpectralGrid::Cartesian(grid) = spectral_grid(&cfg.grid)? else {
        return Err(RunError::config("the far-center sweep needs a cartesian grid"));
    };
    let InitialData::Gaussian { amplitude, width, .. } = cfg.data else {
        return Err(RunError::config("the far-center sweep needs the gaussian data family"));
    };
    let params = step_params(cfg, grid.as_ref())?;
    let rows: Vec<SweepRow> = cfg
        .params
        .centers
        .par_iter()
        .map(|&d| {
            let spec = FarCenterSpec::diagonal(d, width, amplitude, cfg.time.t_final);
            match far_center_deviation(grid.clone(), &spec, &params) {
                Ok(o) => SweepRow {
                    center: d,
                    deviation: Some(o.deviation),
                    status: o.status.to_string(),
                    outer_mass_fraction: Some(o.outer_mass_fraction),
                    steps: o.steps,
                    error: None,
                },
                Err(e) => SweepRow {
                    center: d,
                    deviation: None,
                    status: "aborted".into(),
                    outer_mass_fraction: None,
                    steps: 0,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let meta = [
        ("nodes_per_axis", grid.points_per_axis().to_string()),
        ("half_width", format!("{:e}", grid.half_width())),
        ("dt", format!("{:e}", params.dt())),
        ("amplitude", format!("{amplitude:e}")),
        ("width", format!("{width:e}")),
        ("t_final", format!("{:e}", cfg.time.t_final)),
    ];
    let opt = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), |v| format!("{v:e}"));
    write_table(
        &out_dir.join("farcenter.csv"),
        FARCENTER_HEADER,
        &meta,
        &["center", "deviation", "status", "outer_mass_fraction", "steps"],
        rows.iter().map(|r| {
            vec![format!("{:e}", r.center), opt(r.deviation), r.status.clone(), opt(r.outer_mass_fraction), r.steps.to_string()]
        }),
    )?;

    let mut assertions = Vec::new();
    let all_ok = rows.iter().all(|r| r.deviation.is_some() && r.status == "running");
    assertions.push(Assertion::new(
        "every center ran to the final time on the grid",
        all_ok,
        rows.iter().filter_map(|r| r.error.clone()).collect::<Vec<_>>().join("; "),
    ));
    let devs: Vec<f64> = rows.iter().filter_map(|r| r.deviation).collect();
    if amplitude == 0.0 {
        assertions.push(Assertion::new("zero amplitude is linear", devs.iter().all(|d| *d == 0.0), format!("{devs:?}")));
    } else if all_ok && !devs.is_empty() {
        assertions.push(Assertion::new(
            "deviation strictly decreases with the distance of the center",
            devs.windows(2).all(|w| w[1] < w[0]),
            format!("{devs:?}"),
        ));
        let ratio = devs[devs.len() - 1] / devs[0];
        assertions.push(Assertion::new(
            "farthest deviation below 25% of the centered one",
            ratio < FAR_RATIO,
            format!("ratio {ratio:e}"),
        ));
    }
    Ok(FarCenterOutcome { rows, assertions })
}
