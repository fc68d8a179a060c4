use std::fmt::Debug;

use num_complex::Complex;

use crate::real::{det_sum, Real};

/// Radial component `x̂·∇u` of a gradient and the squared modulus of the
/// remaining tangential part, node by node.
#[derive(Debug, Clone)]
pub struct RadialGradient<T> {
    pub radial: Vec<Complex<T>>,
    pub tangential_sq: Vec<T>,
}

/// A discretization of ℝ³ (or of radial functions on ℝ³) carrying a
/// volume quadrature.
pub trait Domain<T: Real>: Debug + Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cartesian position of node `i`; radial grids report `(r, 0, 0)`.
    fn position(&self, i: usize) -> [T; 3];

    /// `|x|` at node `i`.
    fn radius(&self, i: usize) -> T;

    /// Volume quadrature weight of node `i`.
    fn weight(&self, i: usize) -> T;

    /// The `|x|⁻¹` weight as used by the nonlinearity (regularized where needed).
    fn inverse_radius(&self, i: usize) -> T {
        self.radius(i).recip()
    }

    /// `∫|∇u|² dx`.
    fn kinetic(&self, u: &[Complex<T>]) -> T;

    /// Cartesian gradient components (three on a box, one `∂_r` on radial grids).
    fn gradient(&self, u: &[Complex<T>]) -> Vec<Vec<Complex<T>>>;

    fn radial_gradient(&self, u: &[Complex<T>]) -> RadialGradient<T>;

    /// True if node `i` lies in the outer 10% of the domain.
    fn is_outer(&self, i: usize) -> bool;

    /// Outer radius (radial grids) or half-width (box).
    fn extent(&self) -> T;

    fn is_radial(&self) -> bool;

    /// True if the point `x` lies inside the region the grid represents.
    fn contains(&self, x: [T; 3]) -> bool {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        r <= self.extent()
    }

    /// Interpolated value at `x`, `None` outside the grid.
    fn interpolate(&self, u: &[Complex<T>], x: [T; 3]) -> Option<Complex<T>>;

    /// Analytic tail beyond a truncated grid for a radial density sampled
    /// per node (`density[i]` integrates against `weight(i)`).
    fn tail_estimate(&self, _density: &[T]) -> T {
        T::zero()
    }
}

/// Domains with an exact spectral representation of the Laplacian, used by
/// the split-step solvers.
pub trait SpectralDomain<T: Real>: Domain<T> {
    /// Cell width of the underlying uniform grid.
    fn spacing(&self) -> T;

    /// Spectral coefficients of `u`.
    fn forward(&self, u: &[Complex<T>]) -> Vec<Complex<T>>;

    /// Samples from spectral coefficients.
    fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>>;

    /// `|ξ_k|²` for coefficient `k`.
    fn symbol(&self, k: usize) -> T;

    /// Factor with `∫|∇u|² = factor · Σ_k |ξ_k|² |c_k|²`.
    fn spectral_factor(&self) -> T;

    /// True if mode `k` survives the 2/3 dealiasing mask.
    fn retained(&self, k: usize) -> bool;

    fn n_modes(&self) -> usize;

    /// Multiplies coefficients by `e^{-it|ξ|²}` in place.
    fn propagate_spectrum(&self, coeffs: &mut [Complex<T>], t: T) {
        use rayon::prelude::*;
        coeffs.par_iter_mut().enumerate().for_each(|(k, c)| {
            let phase = -t * self.symbol(k);
            *c = *c * Complex::from_polar(T::one(), phase);
        });
    }

    /// `e^{itΔ}` applied in place.
    fn free_propagate(&self, u: &mut [Complex<T>], t: T) {
        if t == T::zero() {
            return;
        }
        let mut c = self.forward(u);
        self.propagate_spectrum(&mut c, t);
        let out = self.inverse(&c);
        u.copy_from_slice(&out);
    }

    /// Zeroes every coefficient outside the 2/3 mask.
    fn dealias(&self, u: &mut [Complex<T>]) {
        let mut c = self.forward(u);
        for (k, ck) in c.iter_mut().enumerate() {
            if !self.retained(k) {
                *ck = Complex::new(T::zero(), T::zero());
            }
        }
        let out = self.inverse(&c);
        u.copy_from_slice(&out);
    }

    /// `∫|∇u|²` from coefficients.
    fn spectral_kinetic(&self, coeffs: &[Complex<T>]) -> T {
        self.spectral_factor() * det_sum(coeffs.len(), |k| self.symbol(k) * coeffs[k].norm_sqr())
    }

    /// Fraction of `∫|∇u|²` carried by modes outside the dealiasing mask.
    fn spectral_fill(&self, coeffs: &[Complex<T>]) -> T {
        let total = det_sum(coeffs.len(), |k| self.symbol(k) * coeffs[k].norm_sqr());
        if total == T::zero() {
            return T::zero();
        }
        let high = det_sum(coeffs.len(), |k| {
            if self.retained(k) {
                T::zero()
            } else {
                self.symbol(k) * coeffs[k].norm_sqr()
            }
        });
        high / total
    }

    /// `‖a − b‖²_{Ḣ¹}` between two coefficient vectors.
    fn spectral_h1_distance_sq(&self, a: &[Complex<T>], b: &[Complex<T>]) -> T {
        self.spectral_factor() * det_sum(a.len(), |k| self.symbol(k) * (a[k] - b[k]).norm_sqr())
    }
}
