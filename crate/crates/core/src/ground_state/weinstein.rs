//! Sobolev-gradient ascent of the quotient `J(f) = P(f) / ‖∇f‖⁴` over
//! radial trial fields on the mapped grid.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::grid_fields::{h1dot_norm_sq, potential, ComplexField, Domain, MappedRadialGrid};
use crate::real::Real;

/// `J(f) = ‖|x|⁻¹|f|⁴‖_{L¹} / ‖∇f‖⁴_{L²}`.
pub fn weinstein_quotient<T: Real, G: Domain<T>>(f: &ComplexField<T, G>) -> Result<T> {
    let k = h1dot_norm_sq(f);
    if !(k > T::zero()) {
        return Err(LabError::ZeroField("weinstein_quotient"));
    }
    Ok(potential(f) / (k * k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    pub max_iterations: usize,
    /// Stop once the quotient improves by less than this over `window` iterations.
    pub tolerance: f64,
    pub window: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { max_iterations: 5000, tolerance: 1e-9, window: 50 }
    }
}

#[derive(Debug, Clone)]
pub struct AscentReport<T: Real> {
    pub quotient: T,
    pub iterations: usize,
    pub converged: bool,
    /// Last iterate, normalized to `‖∇f‖ = 1`.
    pub maximizer: ComplexField<T, MappedRadialGrid<T>>,
    pub history: Vec<T>,
}

struct Ascent<'a, T: Real> {
    grid: &'a Arc<MappedRadialGrid<T>>,
}

impl<'a, T: Real> Ascent<'a, T> {
    fn field(&self, f: &[T]) -> ComplexField<T, MappedRadialGrid<T>> {
        let vals = f.iter().map(|&x| Complex::new(x, T::zero())).collect();
        ComplexField::new(Arc::clone(self.grid), vals).expect("grid length")
    }

    fn kinetic(&self, f: &[T]) -> T {
        h1dot_norm_sq(&self.field(f))
    }

    fn potential(&self, f: &[T]) -> T {
        let g = self.grid;
        (0..f.len()).fold(T::zero(), |a, i| {
            let f2 = f[i] * f[i];
            a + g.weight(i) * f2 * f2 / g.radius(i)
        })
    }

    fn normalize(&self, f: &mut [T]) {
        let k = self.kinetic(f).sqrt();
        f.iter_mut().for_each(|x| *x = *x / k);
    }

    fn quotient(&self, f: &[T]) -> T {
        let k = self.kinetic(f);
        self.potential(f) / (k * k)
    }

    /// Radial Newton potential `φ = (−Δ)⁻¹ρ`:
    /// `φ(r) = r⁻¹∫₀^r ρ s² ds + ∫_r^∞ ρ s ds`.
    fn inverse_laplacian(&self, rho: &[T]) -> Vec<T> {
        let g = self.grid;
        let r = g.nodes();
        let inner: Vec<T> = rho.iter().zip(r).map(|(p, &s)| *p * s * s).collect();
        let outer: Vec<T> = rho.iter().zip(r).map(|(p, &s)| *p * s).collect();
        let c_inner = g.cumulative_integral(&inner);
        let c_outer = g.cumulative_integral(&outer);
        let total_outer = g.line_integral(&outer);
        (0..rho.len())
            .map(|i| c_inner[i] / r[i] + (total_outer - c_outer[i]))
            .collect()
    }
}

/// Maximizes `J` starting from the radial profile `initial` by projected
/// gradient ascent on the unit Ḣ¹ sphere, using the Ḣ¹ Riesz representer of
/// `dJ` and backtracking on the step size.
///
/// Returns the last iterate's quotient even when the iteration budget runs
/// out; `converged` tells the two apart.
pub fn sharp_constant_via_optimization<T: Real>(
    grid: Arc<MappedRadialGrid<T>>,
    initial: &dyn Fn(T) -> T,
    options: AscentOptions,
) -> Result<AscentReport<T>> {
    let ascent = Ascent { grid: &grid };
    let mut f: Vec<T> = grid.nodes().iter().map(|&r| initial(r)).collect();
    if f.iter().all(|x| *x == T::zero()) {
        return Err(LabError::ZeroField("sharp_constant_via_optimization"));
    }
    ascent.normalize(&mut f);
    let mut j = ascent.quotient(&f);
    let mut history = vec![j];
    let mut step_scale = T::one();
    let mut converged = false;
    let mut iterations = 0;
    let tol = T::lit(options.tolerance);
    while iterations < options.max_iterations {
        iterations += 1;
        let p = ascent.potential(&f);
        let rho: Vec<T> = f.iter().zip(grid.nodes()).map(|(&x, &r)| T::lit(4.0) * x * x * x / r).collect();
        let phi = ascent.inverse_laplacian(&rho);
        let direction: Vec<T> = phi.iter().zip(&f).map(|(&ph, &x)| ph - T::lit(4.0) * p * x).collect();
        let base = (T::lit(4.0) * p).recip();
        let mut s = (step_scale * T::lit(1.5)).min(T::one());
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial: Vec<T> = f.iter().zip(&direction).map(|(&x, &d)| x + s * base * d).collect();
            ascent.normalize(&mut trial);
            let jt = ascent.quotient(&trial);
            if jt.is_finite() && jt >= j {
                accepted = Some((trial, jt));
                break;
            }
            s = s * T::lit(0.5);
        }
        match accepted {
            Some((trial, jt)) => {
                f = trial;
                j = jt;
                step_scale = s;
            }
            None => {
                // No ascent along the representer: a discrete stationary point.
                converged = true;
                history.push(j);
                break;
            }
        }
        history.push(j);
        if history.len() > options.window {
            let old = history[history.len() - 1 - options.window];
            if j - old < tol {
                converged = true;
                break;
            }
        }
    }
    Ok(AscentReport { quotient: j, iterations, converged, maximizer: ascent.field(&f), history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state::{sharp_constant, GroundState};

    #[test]
    fn quotient_is_homogeneous_and_scale_invariant() {
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 48, 8).unwrap());
        let make = |lam: f64, amp: f64| {
            ComplexField::from_radial(g.clone(), move |r| Complex::new(amp * lam.sqrt() * (-(lam * r).powi(2)).exp(), 0.0))
        };
        let j0 = weinstein_quotient(&make(1.0, 1.0)).unwrap();
        for (lam, amp) in [(1.0, 3.0), (0.5, 1.0), (2.0, 0.2)] {
            let j = weinstein_quotient(&make(lam, amp)).unwrap();
            assert!((j - j0).abs() / j0 < 0.01);
        }
    }

    #[test]
    fn gaussian_is_strictly_suboptimal() {
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 48, 8).unwrap());
        let gauss = ComplexField::from_radial(g.clone(), |r| Complex::new((-r * r).exp(), 0.0));
        let q = GroundState::evaluate(g);
        let jg = weinstein_quotient(&gauss).unwrap();
        let jq = weinstein_quotient(&q).unwrap();
        assert!(jg < 0.9 * sharp_constant::<f64>());
        assert!((jq - sharp_constant::<f64>()).abs() / sharp_constant::<f64>() < 5e-3);
    }

    #[test]
    fn inverse_laplacian_of_ground_state_source() {
        // −ΔQ = |x|⁻¹Q³, so (−Δ)⁻¹(Q³/r) must return Q.
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 48, 8).unwrap());
        let ascent = Ascent { grid: &g };
        let rho: Vec<f64> = g.nodes().iter().map(|&r| GroundState::value(r).powi(3) / r).collect();
        let phi = ascent.inverse_laplacian(&rho);
        for (p, &r) in phi.iter().zip(g.nodes()) {
            assert!((p - GroundState::value(r)).abs() < 1e-8, "r={r}: {p}");
        }
    }
}

#[cfg(test)]
mod ascent_tests {
    use super::*;
    use crate::ground_state::sharp_constant;

    #[test]
    fn ascent_from_gaussian_reaches_sharp_constant() {
        let g = Arc::new(MappedRadialGrid::<f64>::new(1.0, 48, 8).unwrap());
        let report = sharp_constant_via_optimization(g, &|r: f64| (-r * r).exp(), AscentOptions::default()).unwrap();
        let c1 = sharp_constant::<f64>();
        eprintln!("J = {} ({} iterations, converged {})", report.quotient, report.iterations, report.converged);
        assert!((report.quotient - c1).abs() / c1 < 0.01);
        assert!(report.history.windows(2).all(|w| w[1] >= w[0]));
    }
}
