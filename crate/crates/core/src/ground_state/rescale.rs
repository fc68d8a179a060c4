use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::grid_fields::{ComplexField, Domain};
use crate::real::{det_sum, Real};

/// `g φ(x) = λ^{-1/2} φ((x − x₀)/λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaleTranslate<T> {
    scale: T,
    center: [T; 3],
}

impl<T: Real> RescaleTranslate<T> {
    pub fn new(scale: T, center: [T; 3]) -> Result<Self> {
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(LabError::InvalidParameter(format!("rescale factor must be positive, got {scale}")));
        }
        Ok(Self { scale, center })
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn center(&self) -> [T; 3] {
        self.center
    }
}

/// Result of resampling a rescaled/translated field onto a target grid.
#[derive(Debug, Clone)]
pub struct Rescaled<T: Real, G> {
    pub field: ComplexField<T, G>,
    /// Share of the Ḣ¹ mass lost to the target grid's boundary.
    pub outside_fraction: T,
    /// `outside_fraction` exceeds 1%.
    pub flagged: bool,
}

/// Resamples `op` applied to `field` onto `target` by interpolating the
/// source samples (cubic on uniform grids, panel Lagrange on mapped ones).
pub fn apply_rescale_translate<T, S, G>(
    op: &RescaleTranslate<T>,
    field: &ComplexField<T, S>,
    target: Arc<G>,
) -> Result<Rescaled<T, G>>
where
    T: Real,
    S: Domain<T>,
    G: Domain<T>,
{
    if target.is_radial() && op.center.iter().any(|c| *c != T::zero()) {
        return Err(LabError::InvalidParameter(
            "a translated field is not radial; use a box target".into(),
        ));
    }
    let src = field.grid();
    let amp = op.scale.sqrt().recip();
    let values: Vec<Complex<T>> = (0..target.len())
        .into_par_iter()
        .map(|i| {
            let x = target.position(i);
            let y = [
                (x[0] - op.center[0]) / op.scale,
                (x[1] - op.center[1]) / op.scale,
                (x[2] - op.center[2]) / op.scale,
            ];
            src.interpolate(field.values(), y)
                .map(|v| v * amp)
                .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
        })
        .collect();
    // The Ḣ¹ density is invariant under the map, so the lost share is the
    // source density whose image falls outside the target.
    let grads = src.gradient(field.values());
    let density = |i: usize| grads.iter().fold(T::zero(), |a, c| a + c[i].norm_sqr()) * src.weight(i);
    let image = |i: usize| {
        let y = src.position(i);
        [
            op.scale * y[0] + op.center[0],
            op.scale * y[1] + op.center[1],
            op.scale * y[2] + op.center[2],
        ]
    };
    let total = det_sum(src.len(), density);
    let lost = det_sum(src.len(), |i| if target.contains(image(i)) { T::zero() } else { density(i) });
    let outside_fraction = if total > T::zero() { lost / total } else { T::zero() };
    let out = ComplexField::new(target, values)?;
    Ok(Rescaled { field: out, outside_fraction, flagged: outside_fraction > T::lit(0.01) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state::GroundState;
    use crate::grid_fields::{h1dot_norm_sq, mass, Grid3D, MappedRadialGrid};

    #[test]
    fn identity_on_same_grid() {
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 24, 6).unwrap());
        let q = GroundState::evaluate(g.clone());
        let op = RescaleTranslate::new(1.0, [0.0; 3]).unwrap();
        let out = apply_rescale_translate(&op, &q, g).unwrap();
        for (a, b) in q.values().iter().zip(out.field.values()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(!out.flagged);
    }

    #[test]
    fn dilated_ground_state_keeps_kinetic_energy() {
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 32, 8).unwrap());
        let q = GroundState::evaluate(g.clone());
        let op = RescaleTranslate::new(2.0, [0.0; 3]).unwrap();
        let out = apply_rescale_translate(&op, &q, g).unwrap();
        let (k0, k1) = (h1dot_norm_sq(&q), h1dot_norm_sq(&out.field));
        assert!((k1 - k0).abs() / k0 < 0.01, "{k0} vs {k1}");
        let exact = GroundState::value(3.0 / 2.0) / 2f64.sqrt();
        let probe = out.field.grid().interpolate(out.field.values(), [3.0, 0.0, 0.0]).unwrap();
        assert!((probe.re - exact).abs() < 1e-6);
    }

    #[test]
    fn translated_gaussian_keeps_norms() {
        let box_grid = Arc::new(Grid3D::<f64>::new(64, 16.0).unwrap());
        let gauss = |x: [f64; 3]| Complex::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.25).exp(), 0.0);
        let u = ComplexField::from_fn(box_grid.clone(), gauss);
        let op = RescaleTranslate::new(1.0, [10.0, 0.0, 0.0]).unwrap();
        let out = apply_rescale_translate(&op, &u, box_grid).unwrap();
        let (m0, m1) = (mass(&u), mass(&out.field));
        let (k0, k1) = (h1dot_norm_sq(&u), h1dot_norm_sq(&out.field));
        assert!((m1 - m0).abs() / m0 < 0.01, "{m0} {m1}");
        assert!((k1 - k0).abs() / k0 < 0.01, "{k0} {k1}");
        assert!(!out.flagged);
    }

    #[test]
    fn translation_off_the_box_is_flagged() {
        let box_grid = Arc::new(Grid3D::<f64>::new(32, 8.0).unwrap());
        let u = ComplexField::from_fn(box_grid.clone(), |x| {
            Complex::new((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.0)
        });
        let op = RescaleTranslate::new(1.0, [7.9, 0.0, 0.0]).unwrap();
        assert!(apply_rescale_translate(&op, &u, box_grid).unwrap().flagged);
    }

    #[test]
    fn rejects_nonpositive_scale() {
        assert!(RescaleTranslate::new(0.0f64, [0.0; 3]).is_err());
    }
}
