use super::weight::VirialWeight;
use crate::grid_fields::{ComplexField, Domain};
use crate::real::{det_sum, Real};
use crate::variational::Sign;

/// `M_a = 2 Im ∫ ū ∂ⱼu ∂ⱼa dx`.
pub fn virial_quantity<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, weight: &VirialWeight<T>) -> T {
    let g = field.grid();
    let u = field.values();
    let grad = g.radial_gradient(u);
    T::lit(2.0)
        * det_sum(u.len(), |i| {
            let r = g.radius(i);
            (u[i].conj() * grad.radial[i]).im * weight.jet(r).d1 * g.weight(i)
        })
}

/// The four integrals making up `dM_a/dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialTerms<T> {
    /// `∫ 4 Re aⱼₖ ūⱼ uₖ`
    pub hessian: T,
    /// `−∫ |u|² Δ²a`
    pub bilaplacian: T,
    /// `−μ ∫ |x|⁻¹|u|⁴ Δa`
    pub potential: T,
    /// `−μ ∫ |x|⁻³|u|⁴ x·∇a`
    pub remainder: T,
}

impl<T: Real> VirialTerms<T> {
    pub fn total(&self) -> T {
        self.hessian + self.bilaplacian + self.potential + self.remainder
    }
}

pub fn virial_terms<T: Real, G: Domain<T>>(
    field: &ComplexField<T, G>,
    weight: &VirialWeight<T>,
    sign: Sign,
) -> VirialTerms<T> {
    let g = field.grid();
    let u = field.values();
    let grad = g.radial_gradient(u);
    let mu = sign.mu::<T>();
    let four = T::lit(4.0);
    let n = u.len();
    let hessian = det_sum(n, |i| {
        let r = g.radius(i);
        let j = weight.jet(r);
        // a'/r has the finite limit a''(0) = 2 at the origin
        let tangential = if r > T::zero() { j.d1 / r } else { j.d2 };
        four * (j.d2 * grad.radial[i].norm_sqr() + tangential * grad.tangential_sq[i]) * g.weight(i)
    });
    let bilaplacian = -det_sum(n, |i| {
        let r = g.radius(i);
        if r > T::zero() {
            u[i].norm_sqr() * weight.jet(r).bilaplacian(r) * g.weight(i)
        } else {
            T::zero()
        }
    });
    let nonlinear = |f: &(dyn Fn(T, &super::weight::WeightJet<T>) -> T + Sync)| {
        -mu * det_sum(n, |i| {
            let r = g.radius(i);
            let m2 = u[i].norm_sqr();
            m2 * m2 * g.inverse_radius(i) * f(r, &weight.jet(r)) * g.weight(i)
        })
    };
    let potential = nonlinear(&|r, j| if r > T::zero() { j.laplacian(r) } else { T::lit(6.0) });
    let remainder = nonlinear(&|r, j| if r > T::zero() { j.d1 / r } else { T::lit(2.0) });
    VirialTerms { hessian, bilaplacian, potential, remainder }
}

/// `dM_a/dt` assembled from the local virial identity.
pub fn virial_rate<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, weight: &VirialWeight<T>, sign: Sign) -> T {
    virial_terms(field, weight, sign).total()
}
