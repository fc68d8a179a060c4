use std::sync::Arc;

use crate::grid_fields::{ComplexField, Domain, UniformRadialGrid};
use crate::real::Real;

use super::GroundState;

/// `max_j r_j·|Δ_h u + |x|⁻¹|u|²u|(r_j)` with the centered radial Laplacian.
///
/// The `r` factor is the residual of the substituted form `v = r·u`,
/// `v'' + |u|²u = 0`, which has a bounded truncation error up to the origin.
pub fn elliptic_residual_of<T: Real>(u: &ComplexField<T, UniformRadialGrid<T>>) -> T {
    let g = u.grid();
    let vals = u.values();
    (0..g.len() - 1)
        .map(|j| {
            let r = g.radius(j);
            let nl = vals[j] * (vals[j].norm_sqr() / r);
            (g.laplacian_at(vals, j) + nl).norm() * r
        })
        .fold(T::zero(), T::max)
}

/// Discrete elliptic residual of the exact ground state.
pub fn elliptic_residual<T: Real>(grid: Arc<UniformRadialGrid<T>>) -> T {
    elliptic_residual_of(&GroundState::evaluate(grid))
}
