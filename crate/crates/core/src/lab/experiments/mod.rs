mod constants;
mod defocusing;
mod dichotomy;
mod farcenter;
mod single;

pub use constants::{run_constants, ConstantsOutcome, ASCENT_TOLERANCE, CONSTANT_TOLERANCE, RESIDUAL_POINTS};
pub use defocusing::{run_defocusing, DefocusingOutcome};
pub use dichotomy::{run_dichotomy, DichotomyOutcome};
pub use farcenter::{run_far_center, FarCenterOutcome, FARCENTER_HEADER, FAR_RATIO};
pub use single::{run_single, SingleOutcome};
