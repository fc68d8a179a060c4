//! Integral norms and functionals of complex fields.

use num_complex::Complex;

use super::domain::Domain;
use super::field::ComplexField;
use crate::error::{LabError, Result};
use crate::real::{det_sum, Real};

/// Weight exponent `s` of `|x|⁻ˢ` and field exponent `q` of `|u|^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedNormSpec {
    s: u32,
    q: u32,
}

impl WeightedNormSpec {
    /// `∫|u|²`
    pub const MASS: Self = Self { s: 0, q: 2 };
    /// `P(u) = ∫|x|⁻¹|u|⁴`
    pub const POTENTIAL: Self = Self { s: 1, q: 4 };
    /// `∫|x|⁻²|u|²`
    pub const HARDY: Self = Self { s: 2, q: 2 };
    /// `∫|x|⁻³|u|⁴`
    pub const VIRIAL_REMAINDER: Self = Self { s: 3, q: 4 };

    pub fn new(s: u32, q: u32) -> Result<Self> {
        match (s, q) {
            (0, 2) | (1, 4) | (2, 2) | (3, 4) => Ok(Self { s, q }),
            _ => Err(LabError::InvalidNormSpec { s, q }),
        }
    }

    pub fn weight_exponent(&self) -> u32 {
        self.s
    }

    pub fn field_exponent(&self) -> u32 {
        self.q
    }
}

/// Weighted integral together with diagnostics on how much of it sits at the
/// edge of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralReport<T> {
    pub value: T,
    /// Share of `value` contributed by the outer region of the grid.
    pub outer_fraction: T,
    /// Analytic tail added beyond a truncated grid.
    pub tail: T,
    /// The integrand has not decayed by the edge of the grid.
    pub slow_decay: bool,
}

/// Outer-region share above which an integral is flagged as slowly decaying.
pub const SLOW_DECAY_FRACTION: f64 = 0.1;

fn density<T: Real>(u: Complex<T>, inv_r: T, spec: WeightedNormSpec) -> T {
    let m2 = u.norm_sqr();
    let field = if spec.q == 4 { m2 * m2 } else { m2 };
    field * inv_r.powi(spec.s as i32)
}

pub fn weighted_integral_report<T: Real, G: Domain<T>>(
    field: &ComplexField<T, G>,
    spec: WeightedNormSpec,
) -> Result<IntegralReport<T>> {
    let spec = WeightedNormSpec::new(spec.s, spec.q)?;
    let g = field.grid();
    let u = field.values();
    let dens: Vec<T> = (0..u.len()).map(|i| density(u[i], g.inverse_radius(i), spec)).collect();
    let body = det_sum(u.len(), |i| dens[i] * g.weight(i));
    let outer = det_sum(u.len(), |i| if g.is_outer(i) { dens[i] * g.weight(i) } else { T::zero() });
    let tail = g.tail_estimate(&dens);
    let value = body + tail;
    let outer_fraction = if value > T::zero() { (outer + tail) / value } else { T::zero() };
    Ok(IntegralReport {
        value,
        outer_fraction,
        tail,
        slow_decay: outer_fraction > T::lit(SLOW_DECAY_FRACTION),
    })
}

/// `∫|x|⁻ˢ|u|^q dx` by grid quadrature.
pub fn weighted_integral<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, spec: WeightedNormSpec) -> Result<T> {
    weighted_integral_report(field, spec).map(|r| r.value)
}

pub fn mass<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> T {
    weighted_integral(field, WeightedNormSpec::MASS).expect("mass spec is valid")
}

/// `P(u) = ∫|x|⁻¹|u|⁴ dx`.
pub fn potential<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> T {
    weighted_integral(field, WeightedNormSpec::POTENTIAL).expect("potential spec is valid")
}

/// `‖u‖²_{Ḣ¹} = ∫|∇u|² dx`.
pub fn h1dot_norm_sq<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> T {
    field.grid().kinetic(field.values())
}

pub fn gradient<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> Vec<ComplexField<T, G>> {
    field
        .grid()
        .gradient(field.values())
        .into_iter()
        .map(|c| field.with_values(c).expect("gradient has grid length"))
        .collect()
}

/// `‖|x|⁻¹u‖²_{L²} / ‖∇u‖²_{L²}`, at most 4 in three dimensions.
pub fn hardy_ratio<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> Result<T> {
    if field.is_zero() {
        return Err(LabError::ZeroField("hardy_ratio"));
    }
    let kinetic = h1dot_norm_sq(field);
    if !(kinetic > T::zero()) {
        return Err(LabError::ZeroField("hardy_ratio"));
    }
    Ok(weighted_integral(field, WeightedNormSpec::HARDY)? / kinetic)
}

/// `‖∇u‖_{L^p}` using the pointwise gradient modulus.
pub fn gradient_lp_norm<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, p: T) -> T {
    let grads = field.grid().gradient(field.values());
    let g = field.grid();
    let integral = det_sum(field.len(), |i| {
        let m2 = grads.iter().fold(T::zero(), |a, c| a + c[i].norm_sqr());
        m2.powf(p / T::lit(2.0)) * g.weight(i)
    });
    integral.powf(p.recip())
}

/// `∫|u|^{10} dx`.
pub fn l10_integrand<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> T {
    let g = field.grid();
    let u = field.values();
    det_sum(u.len(), |i| {
        let m2 = u[i].norm_sqr();
        let m4 = m2 * m2;
        m4 * m4 * m2 * g.weight(i)
    })
}

/// Mass fraction held in the outer 10% of the domain.
pub fn outer_mass_fraction<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> T {
    let g = field.grid();
    let u = field.values();
    let total = det_sum(u.len(), |i| u[i].norm_sqr() * g.weight(i));
    if total == T::zero() {
        return T::zero();
    }
    det_sum(u.len(), |i| if g.is_outer(i) { u[i].norm_sqr() * g.weight(i) } else { T::zero() }) / total
}
