//! Periodic box `[-L, L)³` offset by half a cell, with FFT-based spectral
//! operators.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::domain::{Domain, RadialGradient, SpectralDomain};
use super::quadrature::lagrange_weights_at;
use crate::error::{LabError, Result};
use crate::real::Real;

#[derive(Clone)]
pub struct Grid3D<T: Real> {
    n: usize,
    half_width: T,
    h: T,
    /// Angular wavenumber per FFT index along one axis.
    wavenumbers: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    backward: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Grid3D<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid3D").field("n", &self.n).field("half_width", &self.half_width).finish()
    }
}

impl<T: Real> Grid3D<T> {
    /// `n` points per axis (a power of two), box half-width `half_width`.
    pub fn new(n: usize, half_width: T) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!("points per axis must be a power of two ≥ 4, got {n}")));
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(LabError::InvalidGrid(format!("box half-width must be positive, got {half_width}")));
        }
        let h = T::lit(2.0) * half_width / T::count(n);
        let dk = T::PI() / half_width;
        let wavenumbers = (0..n)
            .map(|m| {
                let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                T::lit(signed) * dk
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            half_width,
            h,
            wavenumbers,
            forward: planner.plan_fft_forward(n),
            backward: planner.plan_fft_inverse(n),
        })
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Node coordinate along one axis.
    pub fn coordinate(&self, m: usize) -> T {
        -self.half_width + (T::count(m) + T::lit(0.5)) * self.h
    }

    fn split(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    /// Angular wavevector of flat spectral index `k`; the Nyquist component is
    /// zeroed for odd-order derivatives.
    pub fn wavevector(&self, k: usize) -> [T; 3] {
        let (a, b, c) = self.split(k);
        let comp = |m: usize| if m == self.n / 2 { T::zero() } else { self.wavenumbers[m] };
        [comp(a), comp(b), comp(c)]
    }

    fn fft3(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        let n = self.n;
        let slab = n * n;
        // x: contiguous rows
        data.par_chunks_mut(slab).for_each(|s| fft.process(s));
        // y: transpose within each slab
        data.par_chunks_mut(slab).for_each(|s| {
            let mut t = vec![Complex::new(T::zero(), T::zero()); slab];
            for j in 0..n {
                for i in 0..n {
                    t[j + n * i] = s[i + n * j];
                }
            }
            fft.process(&mut t);
            for j in 0..n {
                for i in 0..n {
                    s[i + n * j] = t[j + n * i];
                }
            }
        });
        // z: swap x and z through a scratch cube
        let mut t = vec![Complex::new(T::zero(), T::zero()); data.len()];
        let src: &[Complex<T>] = data;
        t.par_chunks_mut(slab).enumerate().for_each(|(a, out)| {
            for j in 0..n {
                for b in 0..n {
                    out[b + n * j] = src[a + n * j + slab * b];
                }
            }
        });
        t.par_chunks_mut(slab).for_each(|s| fft.process(s));
        let t_ref: &[Complex<T>] = &t;
        data.par_chunks_mut(slab).enumerate().for_each(|(b, out)| {
            for j in 0..n {
                for a in 0..n {
                    out[a + n * j] = t_ref[b + n * j + slab * a];
                }
            }
        });
    }

    fn inverse_raw(&self, data: &mut [Complex<T>]) {
        self.fft3(data, &self.backward);
        let scale = T::one() / T::count(data.len());
        data.par_iter_mut().for_each(|c| *c = *c * scale);
    }

    /// Spectral gradient components.
    pub fn spectral_gradient(&self, u: &[Complex<T>]) -> [Vec<Complex<T>>; 3] {
        let coeffs = self.forward(u);
        let component = |axis: usize| {
            let mut c: Vec<Complex<T>> = coeffs
                .par_iter()
                .enumerate()
                .map(|(k, &ck)| ck * Complex::new(T::zero(), self.wavevector(k)[axis]))
                .collect();
            self.inverse_raw(&mut c);
            c
        };
        [component(0), component(1), component(2)]
    }
}

impl<T: Real> Domain<T> for Grid3D<T> {
    fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    fn position(&self, i: usize) -> [T; 3] {
        let (a, b, c) = self.split(i);
        [self.coordinate(a), self.coordinate(b), self.coordinate(c)]
    }

    fn radius(&self, i: usize) -> T {
        let [x, y, z] = self.position(i);
        (x * x + y * y + z * z).sqrt()
    }

    fn weight(&self, _i: usize) -> T {
        self.h * self.h * self.h
    }

    /// `min(|x|⁻¹, (h/2)⁻¹)`.
    fn inverse_radius(&self, i: usize) -> T {
        let cap = T::lit(2.0) / self.h;
        self.radius(i).recip().min(cap)
    }

    fn kinetic(&self, u: &[Complex<T>]) -> T {
        self.spectral_kinetic(&self.forward(u))
    }

    fn gradient(&self, u: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
        self.spectral_gradient(u).into_iter().collect()
    }

    fn radial_gradient(&self, u: &[Complex<T>]) -> RadialGradient<T> {
        let [gx, gy, gz] = self.spectral_gradient(u);
        let (radial, tangential_sq): (Vec<_>, Vec<_>) = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let [x, y, z] = self.position(i);
                let r = (x * x + y * y + z * z).sqrt();
                let ur = (gx[i] * x + gy[i] * y + gz[i] * z) / r;
                let total = gx[i].norm_sqr() + gy[i].norm_sqr() + gz[i].norm_sqr();
                (ur, (total - ur.norm_sqr()).max(T::zero()))
            })
            .unzip();
        RadialGradient { radial, tangential_sq }
    }

    fn is_outer(&self, i: usize) -> bool {
        let p = self.position(i);
        let edge = T::lit(0.9) * self.half_width;
        p.iter().any(|c| c.abs() > edge)
    }

    fn extent(&self) -> T {
        self.half_width
    }

    fn is_radial(&self) -> bool {
        false
    }

    fn contains(&self, x: [T; 3]) -> bool {
        x.iter().all(|c| c.abs() <= self.half_width)
    }

    /// Tricubic Lagrange interpolation; the stencil is shifted inward near faces.
    fn interpolate(&self, u: &[Complex<T>], x: [T; 3]) -> Option<Complex<T>> {
        let n = self.n as i64;
        let h = self.h.as_f64();
        let lw = self.half_width.as_f64();
        let mut starts = [0usize; 3];
        let mut weights = [[0.0; 4]; 3];
        for axis in 0..3 {
            let xc = x[axis].as_f64();
            if xc < -lw || xc > lw {
                return None;
            }
            let s = (xc + lw) / h - 0.5;
            let start = (s.floor() as i64 - 1).clamp(0, n - 4);
            let xs: Vec<f64> = (0..4).map(|m| (start + m) as f64).collect();
            let w = lagrange_weights_at(&xs, s);
            starts[axis] = start as usize;
            weights[axis].copy_from_slice(&w);
        }
        let nu = self.n;
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in 0..4 {
            for b in 0..4 {
                for a in 0..4 {
                    let w = weights[0][a] * weights[1][b] * weights[2][c];
                    let idx = (starts[0] + a) + nu * ((starts[1] + b) + nu * (starts[2] + c));
                    acc = acc + u[idx] * T::lit(w);
                }
            }
        }
        Some(acc)
    }
}

impl<T: Real> SpectralDomain<T> for Grid3D<T> {
    fn spacing(&self) -> T {
        self.h
    }

    fn forward(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut c = u.to_vec();
        self.fft3(&mut c, &self.forward);
        c
    }

    fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut c = coeffs.to_vec();
        self.inverse_raw(&mut c);
        c
    }

    fn symbol(&self, k: usize) -> T {
        let (a, b, c) = self.split(k);
        let (ka, kb, kc) = (self.wavenumbers[a], self.wavenumbers[b], self.wavenumbers[c]);
        ka * ka + kb * kb + kc * kc
    }

    fn spectral_factor(&self) -> T {
        let h3 = self.h * self.h * self.h;
        h3 / T::count(self.len())
    }

    fn retained(&self, k: usize) -> bool {
        let (a, b, c) = self.split(k);
        let n = self.n;
        let ok = |m: usize| {
            let signed = if m <= n / 2 { m } else { n - m };
            3 * signed <= n
        };
        ok(a) && ok(b) && ok(c)
    }

    fn n_modes(&self) -> usize {
        self.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_node_at_origin() {
        let g = Grid3D::<f64>::new(8, 2.0).unwrap();
        let min_r = (0..g.len()).map(|i| g.radius(i)).fold(f64::INFINITY, f64::min);
        assert!(min_r > 0.0);
        assert!((min_r - 0.5 * 3f64.sqrt() * 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Grid3D::<f64>::new(12, 1.0).is_err());
    }

    #[test]
    fn fft_matches_direct_dft_on_small_cube() {
        let g = Grid3D::<f64>::new(4, 1.0).unwrap();
        let u: Vec<Complex<f64>> = (0..64).map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64).cos())).collect();
        let c = g.forward(&u);
        for (k, ck) in c.iter().enumerate() {
            let (ka, kb, kc) = (k % 4, (k / 4) % 4, k / 16);
            let mut acc = Complex::new(0.0, 0.0);
            for (i, ui) in u.iter().enumerate() {
                let (a, b, cc) = (i % 4, (i / 4) % 4, i / 16);
                let ph = -2.0 * std::f64::consts::PI * ((ka * a + kb * b + kc * cc) as f64) / 4.0;
                acc += ui * Complex::from_polar(1.0, ph);
            }
            assert!((acc - ck).norm() < 1e-10);
        }
    }
}
