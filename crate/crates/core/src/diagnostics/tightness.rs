use crate::grid_fields::{ComplexField, Domain};
use crate::real::{det_sum, Real};

/// Integrals of `|∇u|²`, `|x|⁻¹|u|⁴` and `|x|⁻²|u|²` over `|x| > R`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TightnessTail<T> {
    pub gradient: T,
    pub potential: T,
    pub hardy: T,
}

impl<T: Real> TightnessTail<T> {
    pub fn total(&self) -> T {
        self.gradient + self.potential + self.hardy
    }
}

fn densities<T: Real, G: Domain<T>>(field: &ComplexField<T, G>) -> [Vec<T>; 3] {
    let g = field.grid();
    let u = field.values();
    let grad = g.radial_gradient(u);
    let n = u.len();
    let gradient = (0..n).map(|i| grad.radial[i].norm_sqr() + grad.tangential_sq[i]).collect();
    let potential = (0..n)
        .map(|i| {
            let m2 = u[i].norm_sqr();
            m2 * m2 * g.inverse_radius(i)
        })
        .collect();
    let hardy = (0..n)
        .map(|i| {
            let w = g.inverse_radius(i);
            u[i].norm_sqr() * w * w
        })
        .collect();
    [gradient, potential, hardy]
}

pub fn tightness_tail<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, radius: T) -> TightnessTail<T> {
    let g = field.grid();
    let [d0, d1, d2] = densities(field).map(|mut d| {
        for (i, v) in d.iter_mut().enumerate() {
            if g.radius(i) <= radius {
                *v = T::zero();
            }
        }
        d
    });
    let integrate = |d: &[T]| det_sum(d.len(), |i| d[i] * g.weight(i)) + g.tail_estimate(d);
    TightnessTail { gradient: integrate(&d0), potential: integrate(&d1), hardy: integrate(&d2) }
}

/// Smallest node radius `R` with `tightness_tail(R).total() ≤ fraction × tightness_tail(0).total()`.
pub fn tightness_radius<T: Real, G: Domain<T>>(field: &ComplexField<T, G>, fraction: T) -> T {
    let g = field.grid();
    let d = densities(field);
    let mut nodes: Vec<(T, T)> =
        (0..field.len()).map(|i| (g.radius(i), (d[0][i] + d[1][i] + d[2][i]) * g.weight(i))).collect();
    nodes.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let total = nodes.iter().fold(T::zero(), |a, n| a + n.1);
    let budget = fraction * total;
    let mut tail = T::zero();
    let mut radius = nodes.first().map_or(T::zero(), |n| n.0);
    for (r, m) in nodes {
        if tail + m > budget {
            break;
        }
        tail = tail + m;
        radius = r;
    }
    radius
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use num_complex::Complex;

    use super::*;
    use crate::grid_fields::{MappedRadialGrid, UniformRadialGrid};
    use crate::ground_state::GroundState;

    #[test]
    fn compact_support_has_no_tail() {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(400, 20.0).unwrap());
        let u = ComplexField::from_radial(grid, |r| Complex::new(if r < 5.0 { (r * PI / 5.0).cos() + 1.0 } else { 0.0 }, 0.0));
        let t = tightness_tail(&u, 6.0);
        assert_eq!((t.gradient, t.potential, t.hardy), (0.0, 0.0, 0.0));
    }

    #[test]
    fn ground_state_gradient_tail() {
        let grid = Arc::new(MappedRadialGrid::<f64>::new(1.0, 64, 8).unwrap());
        let q = GroundState::evaluate(grid);
        let t = tightness_tail(&q, 100.0);
        let expected = 16.0 * PI / 100.0;
        assert!((t.gradient - expected).abs() < 0.1 * expected, "{}", t.gradient);
    }

    #[test]
    fn tails_decrease_with_radius() {
        let grid = Arc::new(MappedRadialGrid::<f64>::new(1.0, 32, 6).unwrap());
        let q = GroundState::evaluate(grid);
        let mut last = tightness_tail(&q, 0.0);
        for r in [0.5, 1.0, 3.0, 10.0, 50.0] {
            let t = tightness_tail(&q, r);
            assert!(t.gradient <= last.gradient && t.potential <= last.potential && t.hardy <= last.hardy);
            last = t;
        }
    }

    #[test]
    fn radius_covers_requested_share() {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(2000, 40.0).unwrap());
        let u = ComplexField::from_radial(grid, |r| Complex::new((-r * r / 4.0).exp(), 0.0));
        let r = tightness_radius(&u, 0.01);
        let all = tightness_tail(&u, 0.0).total();
        assert!(tightness_tail(&u, r).total() <= 0.01 * all * (1.0 + 1e-9));
        assert!(tightness_tail(&u, r - 0.1).total() > 0.01 * all);
    }
}
