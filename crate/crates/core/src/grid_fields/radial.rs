//! Radial grids on the half-line: a mapped Gauss–Legendre quadrature grid for
//! the variational constants and a uniform Dirichlet grid for the solver.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::domain::{Domain, RadialGradient, SpectralDomain};
use super::quadrature::{lagrange_weights_at, ReferencePanel};
use crate::error::{LabError, Result};
use crate::real::Real;

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Composite Gauss–Legendre grid on `r = L·t/(1−t)`, `t ∈ (0, t_max)`.
///
/// With `t_max = 1` the grid covers all of `(0, ∞)`; a finite outer radius
/// truncates it, optionally with a power-law tail correction.
#[derive(Debug, Clone)]
pub struct MappedRadialGrid<T> {
    scale: T,
    panels: usize,
    reference: ReferencePanel,
    t_max: f64,
    tail_correction: bool,
    nodes: Vec<T>,
    weights: Vec<T>,
    drdt: Vec<T>,
}

impl<T: Real> MappedRadialGrid<T> {
    /// Untruncated grid: `panels` panels of `order` Gauss points, map scale `scale`.
    pub fn new(scale: T, panels: usize, order: usize) -> Result<Self> {
        Self::build(scale, panels, order, None, false)
    }

    /// Grid truncated at `r_max`.
    pub fn truncated(scale: T, panels: usize, order: usize, r_max: T, tail_correction: bool) -> Result<Self> {
        Self::build(scale, panels, order, Some(r_max), tail_correction)
    }

    fn build(scale: T, panels: usize, order: usize, r_max: Option<T>, tail_correction: bool) -> Result<Self> {
        if !(scale > T::zero()) || panels == 0 || order < 2 {
            return Err(LabError::InvalidGrid(format!(
                "mapped radial grid needs scale > 0, panels ≥ 1, order ≥ 2 (got {scale}, {panels}, {order})"
            )));
        }
        let t_max = match r_max {
            None => 1.0,
            Some(r) if r > T::zero() => {
                let r = r.as_f64();
                r / (scale.as_f64() + r)
            }
            Some(r) => return Err(LabError::InvalidGrid(format!("outer radius {r} must be positive"))),
        };
        let reference = ReferencePanel::new(order);
        let width = t_max / panels as f64;
        let l = scale.as_f64();
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        let mut drdt = Vec::with_capacity(panels * order);
        for p in 0..panels {
            for (&x, &w) in reference.nodes.iter().zip(&reference.weights) {
                let ti = (p as f64 + 0.5 * (x + 1.0)) * width;
                let r = l * ti / (1.0 - ti);
                let jac = l / ((1.0 - ti) * (1.0 - ti));
                nodes.push(T::lit(r));
                drdt.push(T::lit(jac));
                weights.push(T::lit(0.5 * width * w * jac * 4.0 * std::f64::consts::PI * r * r));
            }
        }
        Ok(Self { scale, panels, reference, t_max, tail_correction, nodes, weights, drdt })
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn order(&self) -> usize {
        self.reference.order()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn tail_correction(&self) -> bool {
        self.tail_correction
    }

    /// Outer radius; infinite for the untruncated map.
    pub fn r_max(&self) -> T {
        if self.t_max >= 1.0 {
            T::infinity()
        } else {
            self.scale * T::lit(self.t_max / (1.0 - self.t_max))
        }
    }

    fn panel_width(&self) -> f64 {
        self.t_max / self.panels as f64
    }

    /// `∂_r u` at every node, differentiating each panel's interpolant.
    pub fn derivative(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let m = self.order();
        let scale = T::lit(2.0 / self.panel_width());
        let mut out = vec![czero(); u.len()];
        for p in 0..self.panels {
            let base = p * m;
            for i in 0..m {
                let mut acc = czero::<T>();
                for j in 0..m {
                    acc = acc + u[base + j] * T::lit(self.reference.diff[i * m + j]);
                }
                out[base + i] = acc * (scale / self.drdt[base + i]);
            }
        }
        out
    }

    /// `∫_0^{r_i} f(r) dr` at every node, for real nodal samples `f`.
    pub fn cumulative_integral(&self, f: &[T]) -> Vec<T> {
        let m = self.order();
        let half = T::lit(0.5 * self.panel_width());
        let mut out = vec![T::zero(); f.len()];
        let mut offset = T::zero();
        for p in 0..self.panels {
            let base = p * m;
            for i in 0..m {
                let mut acc = T::zero();
                for j in 0..m {
                    acc = acc + T::lit(self.reference.cumulative[i * m + j]) * f[base + j] * self.drdt[base + j];
                }
                out[base + i] = offset + half * acc;
            }
            let total = (0..m).fold(T::zero(), |a, j| {
                a + T::lit(self.reference.weights[j]) * f[base + j] * self.drdt[base + j]
            });
            offset = offset + half * total;
        }
        out
    }

    /// `∫_0^{r_end} f(r) dr` over the whole grid.
    pub fn line_integral(&self, f: &[T]) -> T {
        let m = self.order();
        let half = T::lit(0.5 * self.panel_width());
        (0..f.len()).fold(T::zero(), |a, i| a + half * T::lit(self.reference.weights[i % m]) * f[i] * self.drdt[i])
    }
}

impl<T: Real> Domain<T> for MappedRadialGrid<T> {
    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn position(&self, i: usize) -> [T; 3] {
        [self.nodes[i], T::zero(), T::zero()]
    }

    fn radius(&self, i: usize) -> T {
        self.nodes[i]
    }

    fn weight(&self, i: usize) -> T {
        self.weights[i]
    }

    fn kinetic(&self, u: &[Complex<T>]) -> T {
        let du = self.derivative(u);
        let density: Vec<T> = du.iter().map(|d| d.norm_sqr()).collect();
        let body = density.iter().zip(&self.weights).fold(T::zero(), |a, (d, w)| a + *d * *w);
        body + self.tail_estimate(&density)
    }

    fn gradient(&self, u: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
        vec![self.derivative(u)]
    }

    fn radial_gradient(&self, u: &[Complex<T>]) -> RadialGradient<T> {
        RadialGradient { radial: self.derivative(u), tangential_sq: vec![T::zero(); u.len()] }
    }

    fn is_outer(&self, i: usize) -> bool {
        i / self.order() == self.panels - 1
    }

    fn extent(&self) -> T {
        self.r_max()
    }

    fn is_radial(&self) -> bool {
        true
    }

    fn interpolate(&self, u: &[Complex<T>], x: [T; 3]) -> Option<Complex<T>> {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt().as_f64();
        let l = self.scale.as_f64();
        let t = r / (l + r);
        if t > self.t_max {
            return None;
        }
        let width = self.panel_width();
        let p = ((t / width).floor() as usize).min(self.panels - 1);
        let xi = 2.0 * (t / width - p as f64) - 1.0;
        let basis = super::quadrature::lagrange_basis(&self.reference.nodes, &self.reference.bary, xi);
        let m = self.order();
        Some(
            basis
                .iter()
                .enumerate()
                .fold(czero(), |a, (j, &b)| a + u[p * m + j] * T::lit(b)),
        )
    }

    fn tail_estimate(&self, density: &[T]) -> T {
        if !self.tail_correction || self.t_max >= 1.0 || density.len() < 2 {
            return T::zero();
        }
        let n = density.len();
        let four_pi = T::lit(4.0) * T::PI();
        let (r1, r2) = (self.nodes[n - 2], self.nodes[n - 1]);
        let g1 = density[n - 2] * four_pi * r1 * r1;
        let g2 = density[n - 1] * four_pi * r2 * r2;
        if !(g1 > T::zero() && g2 > T::zero()) {
            return T::zero();
        }
        let p = -(g2 / g1).ln() / (r2 / r1).ln();
        if !(p > T::one()) {
            return T::zero();
        }
        let big_r = self.r_max();
        g2 * r2.powf(p) * big_r.powf(T::one() - p) / (p - T::one())
    }
}

/// DST-I of length `n` realized by a complex FFT of the odd extension.
#[derive(Clone)]
pub(crate) struct SineTransform<T: Real> {
    n: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for SineTransform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SineTransform").field("n", &self.n).finish()
    }
}

impl<T: Real> SineTransform<T> {
    pub(crate) fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(2 * (n + 1));
        Self { n, fft }
    }

    /// `S_k = Σ_j v_j sin(π j k / (n+1))`, `j, k = 1..n`.
    pub(crate) fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let m = 2 * (n + 1);
        let mut ext = vec![czero::<T>(); m];
        for j in 0..n {
            ext[j + 1] = v[j];
            ext[m - 1 - j] = -v[j];
        }
        self.fft.process(&mut ext);
        // X_k = -2i S_k
        let half_i = Complex::new(T::zero(), T::lit(0.5));
        (1..=n).map(|k| ext[k] * half_i).collect()
    }
}

/// Uniform grid `r_j = j·h`, `j = 1..n`, `h = R/(n+1)`, with homogeneous
/// Dirichlet conditions on `v = r·u` at `r = 0` and `r = R`.
#[derive(Debug, Clone)]
pub struct UniformRadialGrid<T: Real> {
    n: usize,
    r_max: T,
    h: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    dst: SineTransform<T>,
}

impl<T: Real> UniformRadialGrid<T> {
    pub fn new(n: usize, r_max: T) -> Result<Self> {
        if n < 4 || !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(LabError::InvalidGrid(format!(
                "uniform radial grid needs n ≥ 4 and finite R > 0 (got {n}, {r_max})"
            )));
        }
        let h = r_max / T::count(n + 1);
        let nodes: Vec<T> = (1..=n).map(|j| T::count(j) * h).collect();
        let four_pi = T::lit(4.0) * T::PI();
        let weights = nodes.iter().map(|&r| four_pi * r * r * h).collect();
        Ok(Self { n, r_max, h, nodes, weights, dst: SineTransform::new(n) })
    }

    /// Grid with spacing close to `h` on `(0, r_max)`.
    pub fn with_spacing(h: T, r_max: T) -> Result<Self> {
        let n = (r_max / h).round().to_usize().unwrap_or(0).saturating_sub(1);
        Self::new(n, r_max)
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Second-order centered differences; one-sided at `r_1`, Dirichlet ghost at `R`.
    pub fn derivative(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let two_h = T::lit(2.0) * self.h;
        let mut out = vec![czero(); n];
        out[0] = (u[0] * T::lit(-3.0) + u[1] * T::lit(4.0) - u[2]) / two_h;
        for j in 1..n - 1 {
            out[j] = (u[j + 1] - u[j - 1]) / two_h;
        }
        out[n - 1] = (czero::<T>() - u[n - 2]) / two_h;
        out
    }

    /// Sample `j` of the second-order discrete radial Laplacian
    /// `∂_rr + (2/r)∂_r`, using `v_0 = 0` at the origin; `j < n-1`.
    pub fn laplacian_at(&self, u: &[Complex<T>], j: usize) -> Complex<T> {
        let v = |i: usize| u[i] * self.nodes[i];
        let left = if j == 0 { czero() } else { v(j - 1) };
        (v(j + 1) - v(j) * T::lit(2.0) + left) / (self.h * self.h * self.nodes[j])
    }
}

impl<T: Real> Domain<T> for UniformRadialGrid<T> {
    fn len(&self) -> usize {
        self.n
    }

    fn position(&self, i: usize) -> [T; 3] {
        [self.nodes[i], T::zero(), T::zero()]
    }

    fn radius(&self, i: usize) -> T {
        self.nodes[i]
    }

    fn weight(&self, i: usize) -> T {
        self.weights[i]
    }

    fn kinetic(&self, u: &[Complex<T>]) -> T {
        self.spectral_kinetic(&self.forward(u))
    }

    fn gradient(&self, u: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
        vec![self.derivative(u)]
    }

    fn radial_gradient(&self, u: &[Complex<T>]) -> RadialGradient<T> {
        RadialGradient { radial: self.derivative(u), tangential_sq: vec![T::zero(); u.len()] }
    }

    fn is_outer(&self, i: usize) -> bool {
        self.nodes[i] > T::lit(0.9) * self.r_max
    }

    fn extent(&self) -> T {
        self.r_max
    }

    fn is_radial(&self) -> bool {
        true
    }

    fn interpolate(&self, u: &[Complex<T>], x: [T; 3]) -> Option<Complex<T>> {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r > self.r_max {
            return None;
        }
        let h = self.h.as_f64();
        let rf = r.as_f64();
        let n = self.n as i64;
        // Even extension u(-r) = u(r) across the origin, u(R) = 0 at the wall.
        let sample = |j: i64| -> (f64, Complex<T>) {
            if j <= -1 {
                (j as f64 * h, u[(-j - 1) as usize])
            } else if j >= n {
                (self.r_max.as_f64(), czero())
            } else {
                ((j + 1) as f64 * h, u[j as usize])
            }
        };
        let idx = (rf / h).floor() as i64 - 1;
        let mut xs = Vec::with_capacity(4);
        let mut vs = Vec::with_capacity(4);
        let mut seen_wall = false;
        for j in idx - 1..=idx + 2 {
            if j >= n {
                if seen_wall {
                    continue;
                }
                seen_wall = true;
            }
            let (xj, vj) = sample(j);
            xs.push(xj);
            vs.push(vj);
        }
        let w = lagrange_weights_at(&xs, rf);
        Some(w.iter().zip(&vs).fold(czero(), |a, (&wj, &vj)| a + vj * T::lit(wj)))
    }
}

impl<T: Real> SpectralDomain<T> for UniformRadialGrid<T> {
    fn spacing(&self) -> T {
        self.h
    }

    fn forward(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let v: Vec<Complex<T>> = u.iter().zip(&self.nodes).map(|(u, &r)| *u * r).collect();
        self.dst.apply(&v)
    }

    fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let norm = T::lit(2.0) / T::count(self.n + 1);
        self.dst
            .apply(coeffs)
            .into_iter()
            .zip(&self.nodes)
            .map(|(v, &r)| v * (norm / r))
            .collect()
    }

    fn symbol(&self, k: usize) -> T {
        let xi = T::count(k + 1) * T::PI() / self.r_max;
        xi * xi
    }

    fn spectral_factor(&self) -> T {
        let m = T::count(self.n + 1);
        T::lit(8.0) * T::PI() * self.r_max / (m * m)
    }

    fn retained(&self, k: usize) -> bool {
        3 * (k + 1) <= 2 * self.n
    }

    fn n_modes(&self) -> usize {
        self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapped_weights_recover_ball_volumes() {
        let g = MappedRadialGrid::<f64>::new(1.0, 200, 6).unwrap();
        for big_r in [0.5, 2.0, 10.0] {
            let vol: f64 = g
                .nodes()
                .iter()
                .zip(g.weights())
                .filter(|(r, _)| **r <= big_r)
                .map(|(_, w)| w)
                .sum();
            let exact = 4.0 * std::f64::consts::PI * big_r.powi(3) / 3.0;
            assert!((vol - exact).abs() / exact < 0.02, "R={big_r}: {vol} vs {exact}");
        }
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes()[0] > 0.0 && g.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn sine_transform_is_an_involution_up_to_scale() {
        let n = 37;
        let dst = SineTransform::<f64>::new(n);
        let v: Vec<Complex<f64>> = (0..n).map(|j| Complex::new((j as f64).sin(), (3.0 * j as f64).cos())).collect();
        let back = dst.apply(&dst.apply(&v));
        let s = 2.0 / (n + 1) as f64;
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b * s).norm() < 1e-12);
        }
    }

    #[test]
    fn cumulative_integral_matches_antiderivative() {
        let g = MappedRadialGrid::<f64>::new(1.0, 40, 8).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|r| (-r).exp()).collect();
        let c = g.cumulative_integral(&f);
        for (r, ci) in g.nodes().iter().zip(&c) {
            assert!((ci - (1.0 - (-r).exp())).abs() < 1e-10);
        }
        assert!((g.line_integral(&f) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uniform_interpolation_reproduces_smooth_profile() {
        let g = UniformRadialGrid::<f64>::new(400, 10.0).unwrap();
        let u: Vec<Complex<f64>> = g.nodes().iter().map(|r| Complex::new((-r * r).exp(), 0.0)).collect();
        for r in [0.0, 0.01, 0.3, 1.234, 3.0] {
            let v = g.interpolate(&u, [r, 0.0, 0.0]).unwrap();
            assert!((v.re - (-r * r).exp()).abs() < 1e-5, "r={r}: {}", v.re);
        }
        assert!(g.interpolate(&u, [10.5, 0.0, 0.0]).is_none());
    }
}
