//! Grids, complex fields, spectral differentiation and the integral
//! functionals built on them.

mod cartesian;
mod domain;
mod field;
mod norms;
pub mod quadrature;
mod radial;

pub use cartesian::Grid3D;
pub use domain::{Domain, RadialGradient, SpectralDomain};
pub use field::ComplexField;
pub use norms::{
    gradient, gradient_lp_norm, h1dot_norm_sq, hardy_ratio, l10_integrand, mass, outer_mass_fraction,
    potential, weighted_integral, weighted_integral_report, IntegralReport, WeightedNormSpec,
    SLOW_DECAY_FRACTION,
};
pub use radial::{MappedRadialGrid, UniformRadialGrid};
