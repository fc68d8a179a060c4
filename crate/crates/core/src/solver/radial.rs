use std::sync::Arc;

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::grid_fields::{ComplexField, Domain};
use crate::real::Real;

/// `v = r·u` at the nodes of a radial grid. The grids carry no node at the
/// origin, so the condition `v(0) = 0` is implicit in every operator acting
/// on `v`.
pub fn radial_transform_in<T: Real, G: Domain<T>>(u: &ComplexField<T, G>) -> Result<Vec<Complex<T>>> {
    let g = u.grid();
    if !g.is_radial() {
        return Err(LabError::InvalidGrid("the substitution v = r·u needs a radial grid".into()));
    }
    Ok(u.values().iter().enumerate().map(|(i, z)| *z * g.radius(i)).collect())
}

/// Inverse of [`radial_transform_in`].
pub fn radial_transform_out<T: Real, G: Domain<T>>(grid: Arc<G>, v: &[Complex<T>]) -> Result<ComplexField<T, G>> {
    if !grid.is_radial() {
        return Err(LabError::InvalidGrid("the substitution v = r·u needs a radial grid".into()));
    }
    if v.len() != grid.len() {
        return Err(LabError::LengthMismatch { expected: grid.len(), got: v.len() });
    }
    let values = v.iter().enumerate().map(|(i, z)| *z / grid.radius(i)).collect();
    ComplexField::new(grid, values)
}
