use std::sync::Arc;

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::grid_fields::{outer_mass_fraction, ComplexField, Domain, Grid3D, SpectralDomain};
use crate::real::Real;
use crate::solver::{free_propagate, strang_step, SimulationState, Status, StepParams};

/// An off-center Gaussian datum `A·exp(−|x − x₀|²/w²)` and the comparison time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarCenterSpec<T> {
    pub center: [T; 3],
    pub width: T,
    pub amplitude: T,
    pub t_final: T,
}

impl<T: Real> FarCenterSpec<T> {
    /// Center at distance `distance` along the main diagonal.
    pub fn diagonal(distance: T, width: T, amplitude: T, t_final: T) -> Self {
        let c = distance / T::lit(3.0).sqrt();
        Self { center: [c, c, c], width, amplitude, t_final }
    }

    pub fn datum(&self, grid: Arc<Grid3D<T>>) -> ComplexField<T, Grid3D<T>> {
        let (a, w2, c) = (self.amplitude, self.width * self.width, self.center);
        ComplexField::from_fn(grid, move |x| {
            let d2 = (0..3).fold(T::zero(), |s, k| s + (x[k] - c[k]) * (x[k] - c[k]));
            Complex::new(a * (-d2 / w2).exp(), T::zero())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarCenterOutcome<T> {
    /// `‖u(T) − e^{iTΔ}u₀‖_{Ḣ¹} / ‖u₀‖_{Ḣ¹}`.
    pub deviation: T,
    pub status: Status,
    pub outer_mass_fraction: T,
    pub steps: usize,
}

/// Largest mass share allowed near the faces of the box at the final time.
pub const FAR_CENTER_MASS_LIMIT: f64 = 0.01;

/// Evolves the datum nonlinearly and freely to `t_final` and measures how far
/// apart the two end states are.
pub fn far_center_deviation<T: Real>(
    grid: Arc<Grid3D<T>>,
    spec: &FarCenterSpec<T>,
    params: &StepParams<T>,
) -> Result<FarCenterOutcome<T>> {
    if !grid.contains(spec.center) {
        return Err(LabError::InvalidParameter("far-center datum is centered outside the box".into()));
    }
    let u0 = spec.datum(grid.clone());
    let norm0 = grid.kinetic(u0.values());
    let steps = (spec.t_final / params.dt()).ceil().to_usize().unwrap_or(0).max(1);
    let params = params.with_dt(spec.t_final / T::count(steps))?;
    let mut state = SimulationState::new(u0.clone());
    for _ in 0..steps {
        state = strang_step(state, &params);
        if state.status().is_terminal() {
            break;
        }
    }
    let outer = outer_mass_fraction(state.field());
    if outer > T::lit(FAR_CENTER_MASS_LIMIT) {
        return Err(LabError::MassLeftGrid { fraction: outer.as_f64() });
    }
    let free = free_propagate(&u0, spec.t_final);
    let deviation = if norm0 > T::zero() {
        let a = grid.forward(state.field().values());
        let b = grid.forward(free.values());
        (grid.spectral_h1_distance_sq(&a, &b) / norm0).sqrt()
    } else {
        T::zero()
    };
    Ok(FarCenterOutcome { deviation, status: state.status(), outer_mass_fraction: outer, steps: state.step() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::Sign;

    #[test]
    fn zero_amplitude_is_linear() {
        let grid = Arc::new(Grid3D::<f64>::new(16, 8.0).unwrap());
        let params = StepParams::new(0.05, Sign::Focusing, true).unwrap();
        let out = far_center_deviation(grid, &FarCenterSpec::diagonal(2.0, 1.5, 0.0, 0.2), &params).unwrap();
        assert_eq!(out.deviation, 0.0);
    }

    #[test]
    fn mass_at_the_faces_aborts() {
        let grid = Arc::new(Grid3D::<f64>::new(16, 8.0).unwrap());
        let params = StepParams::new(0.05, Sign::Focusing, true).unwrap();
        let spec = FarCenterSpec { center: [7.5, 0.0, 0.0], width: 1.5, amplitude: 0.5, t_final: 0.1 };
        assert!(matches!(far_center_deviation(grid, &spec, &params), Err(LabError::MassLeftGrid { .. })));
    }

    #[test]
    fn nonlinear_deviation_is_positive_at_the_origin() {
        let grid = Arc::new(Grid3D::<f64>::new(32, 8.0).unwrap());
        let params = StepParams::new(0.02, Sign::Focusing, true).unwrap();
        let out = far_center_deviation(grid, &FarCenterSpec::diagonal(0.0, 1.5, 0.6, 0.2), &params).unwrap();
        assert!(out.deviation > 1e-4 && out.deviation < 1.0, "{}", out.deviation);
    }
}
