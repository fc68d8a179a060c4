//! Numerical laboratory for the three-dimensional energy-critical
//! inhomogeneous nonlinear Schrödinger equation
//!
//! ```text
//! i∂ₜu + Δu + μ|x|⁻¹|u|²u = 0,   μ = +1 focusing, μ = −1 defocusing.
//! ```
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`, which is what the experiment
//! runner uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod grid_fields;
pub mod ground_state;
pub mod lab;
pub mod real;
pub mod solver;
pub mod variational;

pub use error::{LabError, Result};
pub use real::Real;

/// Complex field on a uniform radial grid.
pub type RadialField = grid_fields::ComplexField<f64, grid_fields::UniformRadialGrid<f64>>;
/// Complex field on a periodic cube.
pub type BoxField = grid_fields::ComplexField<f64, grid_fields::Grid3D<f64>>;
/// Complex field on the mapped spectral-element half line.
pub type MappedField = grid_fields::ComplexField<f64, grid_fields::MappedRadialGrid<f64>>;
pub type RadialState = solver::SimulationState<f64, grid_fields::UniformRadialGrid<f64>>;
pub type BoxState = solver::SimulationState<f64, grid_fields::Grid3D<f64>>;
pub type Params = solver::StepParams<f64>;
