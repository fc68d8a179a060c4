use super::state::{SimulationState, Status};
use crate::grid_fields::SpectralDomain;
use crate::real::Real;

/// Trigger levels for the norm-based detectors.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DetectorThresholds<T> {
    /// Blowup is suspected once `‖u(t)‖_{Ḣ¹}` exceeds this multiple of `‖u₀‖_{Ḣ¹}`.
    pub growth_factor: T,
    /// Share of `∫|∇u|²` above the dealiasing cutoff beyond which the run is underresolved.
    pub spectral_fill: T,
}

impl<T: Real> Default for DetectorThresholds<T> {
    fn default() -> Self {
        Self { growth_factor: T::lit(10.0), spectral_fill: T::lit(0.1) }
    }
}

/// Outcome of one detector pass together with the measured quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection<T> {
    pub status: Status,
    pub kinetic: T,
    /// `‖u(t)‖_{Ḣ¹} / ‖u₀‖_{Ḣ¹}`, zero for a vanishing initial field.
    pub growth: T,
    pub fill: T,
}

/// Norm growth and spectral fill of the current state. Never reports
/// [`Status::Dispersed`]; that verdict belongs to the scattering detector
/// run at the final time.
pub fn detect<T: Real, G: SpectralDomain<T>>(
    state: &SimulationState<T, G>,
    thresholds: &DetectorThresholds<T>,
) -> Detection<T> {
    if state.status().is_terminal() {
        return Detection { status: state.status(), kinetic: T::nan(), growth: T::nan(), fill: T::nan() };
    }
    let grid = state.field().grid();
    let coeffs = grid.forward(state.field().values());
    let kinetic = grid.spectral_kinetic(&coeffs);
    let fill = grid.spectral_fill(&coeffs);
    let k0 = state.initial_kinetic();
    let growth = if k0 > T::zero() { (kinetic / k0).sqrt() } else { T::zero() };
    let status = if !kinetic.is_finite() || !fill.is_finite() {
        Status::Underresolved
    } else if growth > thresholds.growth_factor {
        Status::BlowupSuspected
    } else if fill > thresholds.spectral_fill {
        Status::Underresolved
    } else {
        Status::Running
    };
    Detection { status, kinetic, growth, fill }
}
