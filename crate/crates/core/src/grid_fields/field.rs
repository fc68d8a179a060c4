use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::domain::Domain;
use crate::error::{LabError, Result};
use crate::real::Real;

/// Complex samples of a state `u`, one per grid node.
#[derive(Debug)]
pub struct ComplexField<T: Real, G> {
    grid: Arc<G>,
    values: Vec<Complex<T>>,
}

impl<T: Real, G> Clone for ComplexField<T, G> {
    fn clone(&self) -> Self {
        Self { grid: Arc::clone(&self.grid), values: self.values.clone() }
    }
}

impl<T: Real, G: Domain<T>> ComplexField<T, G> {
    pub fn new(grid: Arc<G>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<G>) -> Self {
        let values = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        Self { grid, values }
    }

    /// Samples `f(x)` at every node position.
    pub fn from_fn<F>(grid: Arc<G>, f: F) -> Self
    where
        F: Fn([T; 3]) -> Complex<T> + Sync,
    {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.position(i))).collect();
        Self { grid, values }
    }

    /// Samples a radial profile `f(|x|)`.
    pub fn from_radial<F>(grid: Arc<G>, f: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Sync,
    {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.radius(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<G> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, new samples.
    pub fn with_values(&self, values: Vec<Complex<T>>) -> Result<Self> {
        Self::new(Arc::clone(&self.grid), values)
    }

    pub fn scaled(&self, alpha: T) -> Self {
        let values = self.values.iter().map(|v| *v * alpha).collect();
        Self { grid: Arc::clone(&self.grid), values }
    }

    pub fn conj(&self) -> Self {
        let values = self.values.iter().map(|v| v.conj()).collect();
        Self { grid: Arc::clone(&self.grid), values }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if other.len() != self.len() {
            return Err(LabError::LengthMismatch { expected: self.len(), got: other.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: Arc::clone(&self.grid), values })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Errors with the first non-finite node.
    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            Some(i) => Err(LabError::NonFinite(i)),
            None => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == T::zero() && v.im == T::zero())
    }

    pub fn max_modulus(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }
}
