//! The explicit ground state `Q(x) = (1 + |x|/2)⁻¹`, its rescaled and
//! translated images, the elliptic residual and the sharp embedding
//! constant.

mod elliptic;
mod rescale;
mod weinstein;

use std::sync::Arc;

use num_complex::Complex;

use crate::grid_fields::{h1dot_norm_sq, potential, ComplexField, Domain};
use crate::real::Real;

pub use elliptic::{elliptic_residual, elliptic_residual_of};
pub use rescale::{apply_rescale_translate, RescaleTranslate, Rescaled};
pub use weinstein::{sharp_constant_via_optimization, weinstein_quotient, AscentOptions, AscentReport};

/// `‖∇Q‖²_{L²} = ‖|x|⁻¹Q⁴‖_{L¹} = 8π/3`.
pub fn kinetic_q<T: Real>() -> T {
    T::lit(8.0) * T::PI() / T::lit(3.0)
}

/// `E(Q) = 2π/3`.
pub fn energy_q<T: Real>() -> T {
    T::lit(2.0) * T::PI() / T::lit(3.0)
}

/// Sharp constant `C₁ = 3/(8π)` of `‖|x|⁻¹|u|⁴‖_{L¹} ≤ C₁‖∇u‖⁴_{L²}`.
pub fn sharp_constant<T: Real>() -> T {
    T::lit(3.0) / (T::lit(8.0) * T::PI())
}

/// Evaluator for the closed-form ground state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroundState;

impl GroundState {
    pub fn value<T: Real>(r: T) -> T {
        (T::one() + T::lit(0.5) * r).recip()
    }

    /// Samples of `Q` on every node of `grid`.
    pub fn evaluate<T: Real, G: Domain<T>>(grid: Arc<G>) -> ComplexField<T, G> {
        ComplexField::from_radial(grid, |r| Complex::new(Self::value(r), T::zero()))
    }
}

/// Quadrature values of the ground-state functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateConstants<T> {
    pub kinetic: T,
    pub potential: T,
    pub energy: T,
    /// `P(Q)/‖∇Q‖⁴`
    pub c1: T,
}

pub fn ground_state_constants<T: Real, G: Domain<T>>(grid: Arc<G>) -> GroundStateConstants<T> {
    let q = GroundState::evaluate(grid);
    let kinetic = h1dot_norm_sq(&q);
    let pot = potential(&q);
    GroundStateConstants {
        kinetic,
        potential: pot,
        energy: T::lit(0.5) * kinetic - T::lit(0.25) * pot,
        c1: pot / (kinetic * kinetic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_fields::MappedRadialGrid;

    #[test]
    fn closed_form_values() {
        assert_eq!(GroundState::value(0.0f64), 1.0);
        assert_eq!(GroundState::value(2.0f64), 0.5);
        assert_eq!(GroundState::value(6.0f64), 0.25);
        let mut prev = 1.0f64;
        for k in 1..100 {
            let v = GroundState::value(k as f64 * 0.37);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn constants_on_mapped_grid() {
        let grid = Arc::new(MappedRadialGrid::<f64>::new(1.0, 16, 6).unwrap());
        let c = ground_state_constants(grid);
        let rel = |a: f64, b: f64| (a - b).abs() / b;
        assert!(rel(c.kinetic, kinetic_q()) < 5e-3, "{c:?}");
        assert!(rel(c.potential, kinetic_q()) < 5e-3);
        assert!(rel(c.energy, energy_q()) < 5e-3);
        assert!(rel(c.c1, sharp_constant()) < 5e-3);
        assert!((c.kinetic - c.potential).abs() < 5e-3 * c.kinetic);
    }
}
