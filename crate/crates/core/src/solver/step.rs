use num_complex::Complex;
use rayon::prelude::*;

use super::state::{SimulationState, Status};
use crate::error::{LabError, Result};
use crate::grid_fields::{ComplexField, SpectralDomain};
use crate::real::Real;
use crate::variational::Sign;

/// Default `c` in `dt ≤ c·h²`.
pub const DEFAULT_CFL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams<T> {
    dt: T,
    sign: Sign,
    dealias: bool,
}

impl<T: Real> StepParams<T> {
    pub fn new(dt: T, sign: Sign, dealias: bool) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(LabError::InvalidParameter(format!("timestep must be positive, got {dt}")));
        }
        Ok(Self { dt, sign, dealias })
    }

    /// `dt = cfl·h²` for the spacing of `grid`.
    pub fn from_cfl<G: SpectralDomain<T>>(grid: &G, cfl: T, sign: Sign, dealias: bool) -> Result<Self> {
        let h = grid.spacing();
        Self::new(cfl * h * h, sign, dealias)
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// Same parameters with a different timestep.
    pub fn with_dt(&self, dt: T) -> Result<Self> {
        Self::new(dt, self.sign, self.dealias)
    }
}

/// `e^{itΔ}u`, exact on the grid.
pub fn free_propagate<T: Real, G: SpectralDomain<T>>(field: &ComplexField<T, G>, t: T) -> ComplexField<T, G> {
    let mut out = field.clone();
    field.grid().free_propagate(out.values_mut(), t);
    out
}

fn rotate_in_place<T: Real, G: SpectralDomain<T>>(grid: &G, u: &mut [Complex<T>], tau: T, sign: Sign) {
    let mu_tau = sign.mu::<T>() * tau;
    u.par_iter_mut().enumerate().for_each(|(i, z)| {
        let phase = mu_tau * grid.inverse_radius(i) * z.norm_sqr();
        *z = *z * Complex::from_polar(T::one(), phase);
    });
}

/// Exact flow of `i∂ₜu = −μ w(x)|u|²u` for time `τ`: `u·exp(iμτ·w·|u|²)`.
pub fn nonlinear_phase_step<T: Real, G: SpectralDomain<T>>(
    field: &ComplexField<T, G>,
    tau: T,
    sign: Sign,
) -> ComplexField<T, G> {
    let mut out = field.clone();
    if tau != T::zero() {
        rotate_in_place(field.grid().as_ref(), out.values_mut(), tau, sign);
    }
    out
}

/// One Strang step. A terminal state is returned unchanged; a non-finite
/// result marks the state underresolved. Norm-based detection is left to
/// [`super::detect`], which costs a transform and is run at sampling times.
pub fn strang_step<T: Real, G: SpectralDomain<T>>(
    mut state: SimulationState<T, G>,
    params: &StepParams<T>,
) -> SimulationState<T, G> {
    if state.status().is_terminal() {
        return state;
    }
    let dt = params.dt();
    let half = dt * T::lit(0.5);
    let grid = state.field().grid().clone();
    let mut u = state.field().clone();
    rotate_in_place(grid.as_ref(), u.values_mut(), half, params.sign());
    grid.free_propagate(u.values_mut(), dt);
    rotate_in_place(grid.as_ref(), u.values_mut(), half, params.sign());
    if params.dealias() {
        grid.dealias(u.values_mut());
    }
    let finite = u.is_finite();
    state.advance(u, dt);
    if !finite {
        state.absorb(Status::Underresolved);
    }
    state
}
