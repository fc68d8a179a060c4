use crate::error::{LabError, Result};
use crate::real::Real;

/// Radial virial weight `a(|x|)`: either `a = |x|²` everywhere, or a
/// localized version equal to `|x|²` on `|x| ≤ R` and to the plateau `C·R²`
/// beyond `2R`.
///
/// On the blend region, with `s = (r − R)/R`, the weight is
/// `a' = R·G(s)` where `G(s) = 2(1 − s)⁴(30s³ + 14s² + 5s + 1)`. `G` matches
/// `2r` and its first three derivatives at `s = 0` and vanishes to fourth
/// order at `s = 1`, so `a` is C⁴ with plateau `C = 1 + ∫₀¹G = 31/14`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialWeight<T> {
    radius: Option<T>,
}

/// Value and first four radial derivatives of the weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightJet<T> {
    pub a: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
    pub d4: T,
}

impl<T: Real> WeightJet<T> {
    /// `Δa = a'' + 2a'/r`.
    pub fn laplacian(&self, r: T) -> T {
        self.d2 + T::lit(2.0) * self.d1 / r
    }

    /// `Δ²a = a'''' + 4a'''/r`.
    pub fn bilaplacian(&self, r: T) -> T {
        self.d4 + T::lit(4.0) * self.d3 / r
    }
}

// G(s) = 60s⁷ − 212s⁶ + 258s⁵ − 110s⁴ + 2s + 2 and its derivatives and
// antiderivative, lowest degree first.
const BLEND: [f64; 8] = [2.0, 2.0, 0.0, 0.0, -110.0, 258.0, -212.0, 60.0];
const BLEND_D1: [f64; 7] = [2.0, 0.0, 0.0, -440.0, 1290.0, -1272.0, 420.0];
const BLEND_D2: [f64; 6] = [0.0, 0.0, -1320.0, 5160.0, -6360.0, 2520.0];
const BLEND_D3: [f64; 5] = [0.0, -2640.0, 15480.0, -25440.0, 12600.0];
const BLEND_INT: [f64; 9] = [0.0, 2.0, 1.0, 0.0, 0.0, -22.0, 43.0, -212.0 / 7.0, 7.5];

fn poly<T: Real>(coeffs: &[f64], s: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * s + T::lit(c))
}

impl<T: Real> VirialWeight<T> {
    /// `a = |x|²` on all of space.
    pub fn pure() -> Self {
        Self { radius: None }
    }

    pub fn localized(radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(LabError::InvalidParameter(format!("virial radius must be positive, got {radius}")));
        }
        Ok(Self { radius: Some(radius) })
    }

    /// `R`, or `None` for the pure weight.
    pub fn radius(&self) -> Option<T> {
        self.radius
    }

    /// Plateau constant `C` with `a = C·R²` for `|x| ≥ 2R`.
    pub fn plateau() -> T {
        T::lit(31.0 / 14.0)
    }

    pub fn jet(&self, r: T) -> WeightJet<T> {
        let two = T::lit(2.0);
        let quadratic = WeightJet { a: r * r, d1: two * r, d2: two, d3: T::zero(), d4: T::zero() };
        let big_r = match self.radius {
            None => return quadratic,
            Some(big_r) => big_r,
        };
        if r <= big_r {
            return quadratic;
        }
        if r >= two * big_r {
            let z = T::zero();
            return WeightJet { a: Self::plateau() * big_r * big_r, d1: z, d2: z, d3: z, d4: z };
        }
        let s = (r - big_r) / big_r;
        WeightJet {
            a: big_r * big_r * (T::one() + poly(&BLEND_INT, s)),
            d1: big_r * poly(&BLEND, s),
            d2: poly(&BLEND_D1, s),
            d3: poly(&BLEND_D2, s) / big_r,
            d4: poly(&BLEND_D3, s) / (big_r * big_r),
        }
    }

    /// `max |a^{(k)}(r)|·R^{k−2}` over `samples` points of `[0, 3R]`, for `k = 0..=4`.
    /// Bounded independently of `R` for a localized weight.
    pub fn derivative_bounds(&self, samples: usize) -> [T; 5] {
        let big_r = self.radius.unwrap_or(T::one());
        let mut out = [T::zero(); 5];
        for i in 1..=samples {
            let r = T::lit(3.0) * big_r * T::count(i) / T::count(samples);
            let j = self.jet(r);
            for (k, d) in [j.a, j.d1, j.d2, j.d3, j.d4].into_iter().enumerate() {
                let scaled = d.abs() * big_r.powi(k as i32 - 2);
                out[k] = out[k].max(scaled);
            }
        }
        out
    }
}
