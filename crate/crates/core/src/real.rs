//! Scalar abstraction shared by every grid, field and solver.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst};
use rustfft::FftNum;

/// Floating point scalar the laboratory is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FftNum + Default + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self;

    /// Converts a count or index.
    fn count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }

    fn as_f64(self) -> f64 {
        self
    }
}

/// Fixed-chunk parallel sum. The chunk partition does not depend on the
/// thread pool, so results are bit-identical from run to run.
pub fn det_sum<T: Real, F>(n: usize, f: F) -> T
where
    F: Fn(usize) -> T + Sync,
{
    use rayon::prelude::*;
    const CHUNK: usize = 4096;
    if n <= CHUNK {
        return (0..n).map(&f).fold(T::zero(), |a, b| a + b);
    }
    let partials: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(n);
            (c * CHUNK..end).map(&f).fold(T::zero(), |a, b| a + b)
        })
        .collect();
    partials.into_iter().fold(T::zero(), |a, b| a + b)
}
