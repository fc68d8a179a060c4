use std::sync::Arc;

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::grid_fields::{ComplexField, SpectralDomain};
use crate::real::Real;

/// Tolerances of the scattering detector.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScatterOptions<T> {
    /// Largest relative `Ḣ¹` distance between unwound states in the trailing window.
    pub tolerance: T,
    /// Trailing share of the samples that must be mutually close.
    pub window: T,
    /// Largest mass share allowed in the outer 10% of the domain.
    pub radiation_limit: T,
}

impl<T: Real> Default for ScatterOptions<T> {
    fn default() -> Self {
        Self { tolerance: T::lit(1e-3), window: T::lit(0.25), radiation_limit: T::lit(0.01) }
    }
}

/// Spectra of the unwound states `ψ(t) = e^{−itΔ}u(t)`.
#[derive(Debug, Clone)]
pub struct UnwoundHistory<T: Real, G> {
    grid: Arc<G>,
    times: Vec<T>,
    spectra: Vec<Vec<Complex<T>>>,
}

impl<T: Real, G: SpectralDomain<T>> UnwoundHistory<T, G> {
    pub fn new(grid: Arc<G>) -> Self {
        Self { grid, times: Vec::new(), spectra: Vec::new() }
    }

    /// Unwinds `u(t)` and appends it.
    pub fn push(&mut self, t: T, field: &ComplexField<T, G>) {
        let coeffs = self.grid.forward(field.values());
        self.push_spectrum(t, coeffs);
    }

    /// Appends from the spectrum of `u(t)`.
    pub fn push_spectrum(&mut self, t: T, mut coeffs: Vec<Complex<T>>) {
        self.grid.propagate_spectrum(&mut coeffs, -t);
        self.times.push(t);
        self.spectra.push(coeffs);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    /// `‖ψ(tᵢ) − ψ(tⱼ)‖_{Ḣ¹}`.
    pub fn distance(&self, i: usize, j: usize) -> T {
        self.grid.spectral_h1_distance_sq(&self.spectra[i], &self.spectra[j]).sqrt()
    }

    /// `‖ψ(tᵢ)‖_{Ḣ¹}`.
    pub fn norm(&self, i: usize) -> T {
        self.grid.spectral_kinetic(&self.spectra[i]).sqrt()
    }

    /// The latest unwound state as a field.
    pub fn last_state(&self) -> Option<ComplexField<T, G>> {
        let c = self.spectra.last()?;
        ComplexField::new(self.grid.clone(), self.grid.inverse(c)).ok()
    }
}

/// Result of the Cauchy test on the trailing window.
#[derive(Debug, Clone)]
pub struct ScatterVerdict<T: Real, G> {
    pub dispersed: bool,
    /// Largest pairwise relative distance within the window.
    pub max_deviation: T,
    pub window_start: T,
    pub radiation_clean: bool,
    /// Asymptotic state `u₊ = ψ(t_final)`.
    pub candidate: ComplexField<T, G>,
}

/// Cauchy test in `Ḣ¹` on the trailing window of `history`, combined with a
/// check that at most `radiation_limit` of the mass reached the edge of the
/// grid (`outer_mass_fraction`, measured at the final sample).
pub fn scattering_detector<T: Real, G: SpectralDomain<T>>(
    history: &UnwoundHistory<T, G>,
    outer_mass_fraction: T,
    options: &ScatterOptions<T>,
) -> Result<ScatterVerdict<T, G>> {
    let n = history.len();
    if n < 2 {
        return Err(LabError::InsufficientHistory { got: n, need: 2 });
    }
    let window = (options.window * T::count(n)).ceil().to_usize().unwrap_or(2).clamp(2, n);
    let start = n - window;
    let scale = history.norm(n - 1);
    let mut max_deviation = T::zero();
    for i in start..n {
        for j in i + 1..n {
            let d = history.distance(i, j);
            max_deviation = max_deviation.max(if scale > T::zero() { d / scale } else { d });
        }
    }
    let radiation_clean = outer_mass_fraction < options.radiation_limit;
    let candidate = history.last_state().expect("history is nonempty");
    Ok(ScatterVerdict {
        dispersed: max_deviation < options.tolerance && radiation_clean,
        max_deviation,
        window_start: history.times()[start],
        radiation_clean,
        candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_fields::UniformRadialGrid;
    use crate::solver::free_propagate;

    fn free_history(shift: f64) -> UnwoundHistory<f64, UniformRadialGrid<f64>> {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(511, 30.0).unwrap());
        let u0 = ComplexField::from_radial(grid.clone(), |r| Complex::new((-r * r).exp(), 0.2 * (-r * r / 3.0).exp()));
        let mut h = UnwoundHistory::new(grid);
        for k in 0..20 {
            let t = shift + 0.1 * k as f64;
            h.push(t, &free_propagate(&u0, t));
        }
        h
    }

    #[test]
    fn free_evolution_unwinds_to_a_constant() {
        for shift in [0.0, 3.7] {
            let v = scattering_detector(&free_history(shift), 0.0, &ScatterOptions::default()).unwrap();
            assert!(v.dispersed);
            assert!(v.max_deviation < 1e-12, "{}", v.max_deviation);
        }
    }

    #[test]
    fn radiation_at_the_wall_vetoes_the_verdict() {
        let v = scattering_detector(&free_history(0.0), 0.05, &ScatterOptions::default()).unwrap();
        assert!(!v.dispersed && !v.radiation_clean);
    }

    #[test]
    fn needs_two_samples() {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(31, 5.0).unwrap());
        let mut h = UnwoundHistory::new(grid.clone());
        h.push(0.0, &ComplexField::zeros(grid));
        assert!(matches!(
            scattering_detector(&h, 0.0, &ScatterOptions::default()),
            Err(LabError::InsufficientHistory { got: 1, need: 2 })
        ));
    }
}
