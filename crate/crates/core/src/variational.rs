//! Energy, threshold classification, energy trapping and coercivity margins.

use crate::error::{LabError, Result};
use crate::grid_fields::{h1dot_norm_sq, mass, potential, ComplexField, Domain};
use crate::ground_state::{energy_q, kinetic_q, sharp_constant};
use crate::real::Real;

/// Sign `μ` of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// `μ = +1`
    Focusing,
    /// `μ = −1`
    Defocusing,
}

impl Sign {
    pub fn mu<T: Real>(self) -> T {
        match self {
            Sign::Focusing => T::one(),
            Sign::Defocusing => -T::one(),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Focusing => "focusing",
            Sign::Defocusing => "defocusing",
        })
    }
}

/// `E = ½·kinetic − μ·¼·potential`.
pub fn energy_from_parts<T: Real>(kinetic: T, potential: T, sign: Sign) -> T {
    T::lit(0.5) * kinetic - sign.mu::<T>() * T::lit(0.25) * potential
}

/// `E(u) = ∫ ½|∇u|² − μ¼|x|⁻¹|u|⁴ dx`.
pub fn energy<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, sign: Sign) -> T {
    energy_from_parts(h1dot_norm_sq(field), potential(field), sign)
}

/// Relative guard band on the strict threshold inequalities, so a discretized
/// ground state (whose quadrature sits within roundoff of the constants)
/// classifies as the boundary case it is.
pub const THRESHOLD_GUARD: f64 = 1e-6;

fn below_threshold<T: Real>(kinetic: T, energy: T) -> bool {
    let keep = T::one() - T::lit(THRESHOLD_GUARD);
    energy < energy_q::<T>() * keep && kinetic < kinetic_q::<T>() * keep
}

/// `E(u) < E(Q)` and `‖u‖_{Ḣ¹} < ‖Q‖_{Ḣ¹}` (focusing energy), against the
/// exact constants `2π/3` and `8π/3`.
pub fn subthreshold<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> bool {
    let k = h1dot_norm_sq(field);
    below_threshold(k, energy_from_parts(k, potential(field), Sign::Focusing))
}

/// Outcome of the energy-trapping check `E(u) ≥ ¼‖u‖²_{Ḣ¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapping<T> {
    /// The lower bound holds and the precondition was met.
    pub holds: bool,
    /// `E/kinetic`; `NaN` for the zero field.
    pub ratio: T,
    /// The field was not sub-threshold, so the bound is not guaranteed.
    pub precondition_violated: bool,
}

pub fn trapping_check<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> Trapping<T> {
    let k = h1dot_norm_sq(field);
    let e = energy_from_parts(k, potential(field), Sign::Focusing);
    let pre = below_threshold(k, e);
    let ratio = if k > T::zero() { e / k } else { T::nan() };
    let bound = e >= T::lit(0.25) * k;
    Trapping { holds: pre && bound, ratio, precondition_violated: !pre }
}

/// Coercivity margin `∫|∇u|² − |x|⁻¹|u|⁴` and the sharp-inequality bound on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coercivity<T> {
    pub margin: T,
    /// `margin / kinetic`
    pub fraction: T,
    /// `1 − C₁·kinetic`; the sharp inequality gives `fraction ≥ delta_bound`.
    pub delta_bound: T,
}

pub fn coercivity_from_parts<T: Real>(kinetic: T, potential: T) -> Result<Coercivity<T>> {
    if !(kinetic > T::zero()) {
        return Err(LabError::ZeroField("coercivity fraction"));
    }
    let margin = kinetic - potential;
    Ok(Coercivity { margin, fraction: margin / kinetic, delta_bound: T::one() - sharp_constant::<T>() * kinetic })
}

pub fn coercivity_margin<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> Result<Coercivity<T>> {
    coercivity_from_parts(h1dot_norm_sq(field), potential(field))
}

/// Every functional the variational analysis looks at, in one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalReport<T> {
    pub mass: T,
    pub kinetic: T,
    pub potential: T,
    pub energy: T,
    pub subthreshold: bool,
    pub trapping_ratio: T,
    pub coercivity: Option<Coercivity<T>>,
}

pub fn variational_report<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, sign: Sign) -> VariationalReport<T> {
    let k = h1dot_norm_sq(field);
    let p = potential(field);
    let e = energy_from_parts(k, p, sign);
    let focusing_energy = energy_from_parts(k, p, Sign::Focusing);
    VariationalReport {
        mass: mass(field),
        kinetic: k,
        potential: p,
        energy: e,
        subthreshold: sign == Sign::Focusing && below_threshold(k, focusing_energy),
        trapping_ratio: if k > T::zero() { e / k } else { T::nan() },
        coercivity: coercivity_from_parts(k, p).ok(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_complex::Complex;

    use super::*;
    use crate::grid_fields::MappedRadialGrid;
    use crate::ground_state::GroundState;

    fn grid() -> Arc<MappedRadialGrid<f64>> {
        Arc::new(MappedRadialGrid::new(1.0, 48, 8).unwrap())
    }

    #[test]
    fn energy_of_ground_state_multiples() {
        let q = GroundState::evaluate(grid());
        let pi = std::f64::consts::PI;
        assert!((energy(&q, Sign::Focusing) - 2.0 * pi / 3.0).abs() < 0.005 * 2.0 * pi / 3.0);
        let e2 = energy(&q.scaled(2.0), Sign::Focusing);
        assert!((e2 + 16.0 * pi / 3.0).abs() < 0.01 * 16.0 * pi / 3.0);
        assert_eq!(energy(&ComplexField::zeros(grid()), Sign::Focusing), 0.0);
    }

    #[test]
    fn threshold_classification() {
        let q = GroundState::evaluate(grid());
        assert!(!subthreshold(&q));
        assert!(subthreshold(&q.scaled(0.5)));
        assert!(subthreshold(&ComplexField::zeros(grid())));
        // E(Q/2) = (8π/3)(1/8 − 1/64)
        let e = energy(&q.scaled(0.5), Sign::Focusing);
        assert!((e - 0.916_297_857).abs() < 5e-3);
    }

    #[test]
    fn trapping_ratios() {
        let q = GroundState::evaluate(grid());
        let t = trapping_check(&q.scaled(0.5));
        assert!(t.holds && (t.ratio - 0.4375).abs() < 2e-3, "{t:?}");
        let tiny = trapping_check(&q.scaled(1e-4));
        assert!((tiny.ratio - 0.5).abs() < 1e-6);
        let at_q = trapping_check(&q);
        assert!(at_q.precondition_violated && !at_q.holds);
    }

    #[test]
    fn coercivity_saturates_on_ground_states() {
        let g = grid();
        let q = GroundState::evaluate(g.clone());
        let c = coercivity_margin(&q.scaled(0.5)).unwrap();
        assert!((c.fraction - 0.75).abs() < 3e-3 && (c.delta_bound - 0.75).abs() < 3e-3, "{c:?}");
        let c = coercivity_margin(&q).unwrap();
        assert!(c.fraction.abs() < 5e-3 && c.delta_bound.abs() < 5e-3);
        assert!(coercivity_margin(&ComplexField::zeros(g.clone())).is_err());
        // Gaussian with kinetic 2π/3: K = 3A²(π/2)^{3/2} for width 1.
        let amp = (2.0 * std::f64::consts::PI / 3.0 / (3.0 * (std::f64::consts::PI / 2.0).powf(1.5))).sqrt();
        let gauss = ComplexField::from_radial(g, |r| Complex::new(amp * (-r * r).exp(), 0.0));
        let c = coercivity_margin(&gauss).unwrap();
        assert!((h1dot_norm_sq(&gauss) - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-6);
        assert!(c.fraction > 0.75 + 0.05, "{c:?}");
    }

    #[test]
    fn defocusing_energy_dominates_half_kinetic() {
        let g = grid();
        for amp in [0.1, 1.0, 5.0] {
            let u = ComplexField::from_radial(g.clone(), |r| Complex::new(amp * (-r * r).exp(), 0.0));
            assert!(energy(&u, Sign::Defocusing) >= 0.5 * h1dot_norm_sq(&u));
        }
    }
}
