//! Split-step time integration.
//!
//! One Strang step applies half a nonlinear phase rotation, the exact free
//! propagator for a full step and another half rotation. Both subflows are
//! exact, so the only error is the splitting error, which is second order
//! in `dt`.

mod detect;
mod radial;
mod state;
mod step;

pub use detect::{detect, Detection, DetectorThresholds};
pub use radial::{radial_transform_in, radial_transform_out};
pub use state::{SimulationState, Status};
pub use step::{free_propagate, nonlinear_phase_step, strang_step, StepParams, DEFAULT_CFL};
