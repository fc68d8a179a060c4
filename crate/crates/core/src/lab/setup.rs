//! Grids, initial data and step parameters built from a [`RunConfig`].

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex;

use super::config::{GridSpec, InitialData, RunConfig, TimeStep};
use super::error::RunError;
use crate::grid_fields::{ComplexField, Domain, Grid3D, MappedRadialGrid, SpectralDomain, UniformRadialGrid};
use crate::ground_state::GroundState;
use crate::solver::StepParams;

/// Grids the time integrators run on.
pub enum SpectralGrid {
    Radial(Arc<UniformRadialGrid<f64>>),
    Cartesian(Arc<Grid3D<f64>>),
}

pub fn spectral_grid(spec: &GridSpec) -> Result<SpectralGrid, RunError> {
    match *spec {
        GridSpec::Radial { points, extent } => Ok(SpectralGrid::Radial(Arc::new(UniformRadialGrid::new(points, extent)?))),
        GridSpec::Cartesian { points, extent } => Ok(SpectralGrid::Cartesian(Arc::new(Grid3D::new(points, extent)?))),
        GridSpec::Mapped { .. } => Err(RunError::config("time integration needs a radial or cartesian grid, not a mapped one")),
    }
}

pub fn mapped_grid(spec: &GridSpec) -> Result<Arc<MappedRadialGrid<f64>>, RunError> {
    match *spec {
        GridSpec::Mapped { panels, order, scale, r_max: None, .. } => Ok(Arc::new(MappedRadialGrid::new(scale, panels, order)?)),
        GridSpec::Mapped { panels, order, scale, r_max: Some(r), tail_correction } => {
            Ok(Arc::new(MappedRadialGrid::truncated(scale, panels, order, r, tail_correction)?))
        }
        _ => Err(RunError::config("the constants suite needs a mapped grid")),
    }
}

/// Step parameters from the `[time]` section; dealiasing defaults to on for
/// boxes and off for radial grids.
pub fn step_params<G: SpectralDomain<f64>>(cfg: &RunConfig, grid: &G) -> Result<StepParams<f64>, RunError> {
    let dealias = cfg.time.dealias.unwrap_or(!grid.is_radial());
    let params = match cfg.time.step {
        TimeStep::Fixed(dt) => StepParams::new(dt, cfg.sign, dealias)?,
        TimeStep::Cfl(c) => StepParams::from_cfl(grid, c, cfg.sign, dealias)?,
    };
    Ok(params)
}

/// Radial Gaussian profile `A·exp(−r²/w²)·exp(iβr²)`.
pub fn gaussian_profile(amplitude: f64, width: f64, chirp: f64) -> impl Fn(f64) -> Complex<f64> + Sync {
    move |r| Complex::from_polar(amplitude * (-(r * r) / (width * width)).exp(), chirp * r * r)
}

pub fn initial_field<G: Domain<f64>>(data: &InitialData, grid: Arc<G>) -> Result<ComplexField<f64, G>, RunError> {
    match data {
        InitialData::Gaussian { amplitude, width, center, chirp } => {
            if grid.is_radial() && center.iter().any(|c| *c != 0.0) {
                return Err(RunError::config("an off-center Gaussian needs a cartesian grid"));
            }
            let profile = gaussian_profile(*amplitude, *width, *chirp);
            let c = *center;
            Ok(ComplexField::from_fn(grid, move |x| {
                let d = ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2)).sqrt();
                profile(d)
            }))
        }
        InitialData::RescaledQ { factor, lambda } => {
            let (f, l) = (*factor, *lambda);
            Ok(ComplexField::from_radial(grid, move |r| Complex::new(f * l.sqrt() * GroundState::value(l * r), 0.0)))
        }
        InitialData::Samples { file } => {
            let profile = read_profile(file)?;
            Ok(ComplexField::from_radial(grid, move |r| profile.at(r)))
        }
    }
}

/// Piecewise-linear radial profile, zero beyond the last sample.
struct Profile {
    r: Vec<f64>,
    values: Vec<Complex<f64>>,
}

impl Profile {
    fn at(&self, r: f64) -> Complex<f64> {
        let k = self.r.partition_point(|&s| s < r);
        if k == 0 {
            return self.values[0];
        }
        if k == self.r.len() {
            return Complex::new(0.0, 0.0);
        }
        let (r0, r1) = (self.r[k - 1], self.r[k]);
        let s = (r - r0) / (r1 - r0);
        self.values[k - 1] * (1.0 - s) + self.values[k] * s
    }
}

fn read_profile(path: &Path) -> Result<Profile, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let mut r = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Option<Vec<f64>> = line.split_whitespace().map(|t| t.parse().ok()).collect();
        let bad = || RunError::config(format!("{}: line {}: expected `r re [im]`", path.display(), idx + 1));
        let cols = cols.ok_or_else(bad)?;
        let (rr, re, im) = match cols.as_slice() {
            [a, b] => (*a, *b, 0.0),
            [a, b, c] => (*a, *b, *c),
            _ => return Err(bad()),
        };
        if r.last().is_some_and(|&last| rr <= last) {
            return Err(RunError::config(format!("{}: line {}: radii must increase", path.display(), idx + 1)));
        }
        r.push(rr);
        values.push(Complex::new(re, im));
    }
    if r.len() < 2 {
        return Err(RunError::config(format!("{}: need at least two samples", path.display())));
    }
    Ok(Profile { r, values })
}
