//! Functionals evaluated along trajectories: conservation, virial
//! quantities, tightness tails, scattering detection and the `L¹⁰`
//! space-time accumulator.

mod far_center;
mod l10;
mod scattering;
mod tightness;
mod trajectory;
mod virial;
mod weight;

pub use far_center::{far_center_deviation, FarCenterOutcome, FarCenterSpec, FAR_CENTER_MASS_LIMIT};
pub use l10::L10Accumulator;
pub use scattering::{scattering_detector, ScatterOptions, ScatterVerdict, UnwoundHistory};
pub use tightness::{tightness_radius, tightness_tail, TightnessTail};
pub use trajectory::{
    run_trajectory, time_reversed, DiagnosticsRecord, Trajectory, TrajectoryOptions, VirialCheck,
};
pub use virial::{virial_quantity, virial_rate, virial_terms, VirialTerms};
pub use weight::{VirialWeight, WeightJet};
