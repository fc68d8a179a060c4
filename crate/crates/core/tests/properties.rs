use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use proptest::prelude::*;

use inls_core::diagnostics::{
    scattering_detector, tightness_tail, virial_rate, ScatterOptions, UnwoundHistory, VirialWeight,
};
use inls_core::grid_fields::{
    h1dot_norm_sq, hardy_ratio, mass, potential, weighted_integral, ComplexField, Domain, Grid3D, MappedRadialGrid,
    SpectralDomain, UniformRadialGrid, WeightedNormSpec,
};
use inls_core::ground_state::{sharp_constant, weinstein_quotient};
use inls_core::solver::free_propagate;
use inls_core::variational::{coercivity_margin, energy, subthreshold, Sign};

/// One term `c·(1 + b·r)·e^{−a r²}` of a smooth radial trial profile.
#[derive(Debug, Clone, Copy)]
struct Term {
    c: f64,
    a: f64,
    b: f64,
}

fn terms(max: usize) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(
        (-1.0f64..1.0, 0.3f64..3.0, 0.0f64..2.0).prop_map(|(c, a, b)| Term { c, a, b }),
        1..=max,
    )
    .prop_filter("nonzero profile", |ts| ts.iter().map(|t| t.c.abs()).sum::<f64>() > 0.1)
}

fn profile(ts: &[Term], r: f64) -> f64 {
    ts.iter().map(|t| t.c * (1.0 + t.b * r) * (-t.a * r * r).exp()).sum()
}

fn mapped() -> Arc<MappedRadialGrid<f64>> {
    Arc::new(MappedRadialGrid::new(1.0, 32, 8).unwrap())
}

fn sample<G: Domain<f64>>(grid: &Arc<G>, ts: &[Term], lambda: f64, amp: f64) -> ComplexField<f64, G> {
    ComplexField::from_radial(grid.clone(), |r| Complex::new(amp * lambda.sqrt() * profile(ts, lambda * r), 0.0))
}

fn energy_norm_sq(c: &[Complex<f64>]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radial_transform_is_parseval(ts in terms(3), phase in 0.0f64..6.0) {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(255, 20.0).unwrap());
        let u = ComplexField::from_radial(grid.clone(), |r| Complex::from_polar(profile(&ts, r), phase * r));
        let c = grid.forward(u.values());
        let v: Vec<Complex<f64>> = u.values().iter().zip(grid.nodes()).map(|(z, r)| z * r).collect();
        let ratio = energy_norm_sq(&c) / (energy_norm_sq(&v) * 128.0);
        prop_assert!((ratio - 1.0).abs() < 1e-12, "ratio {ratio}");
        let back = grid.inverse(&c);
        let err = back.iter().zip(u.values()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / energy_norm_sq(u.values());
        prop_assert!(err.sqrt() < 1e-12);
    }

    #[test]
    fn box_transform_is_parseval(ts in terms(2)) {
        let grid = Arc::new(Grid3D::<f64>::new(16, 6.0).unwrap());
        let u = ComplexField::from_fn(grid.clone(), |x| Complex::new(profile(&ts, (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()), x[0] * 0.1));
        let c = grid.forward(u.values());
        let ratio = energy_norm_sq(&c) / (energy_norm_sq(u.values()) * u.len() as f64);
        prop_assert!((ratio - 1.0).abs() < 1e-12, "ratio {ratio}");
        let back = grid.inverse(&c);
        let err = back.iter().zip(u.values()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / energy_norm_sq(u.values());
        prop_assert!(err.sqrt() < 1e-12);
    }

    #[test]
    fn critical_norms_are_scale_invariant(ts in terms(3), log_lambda in (0.25f64).ln()..(4.0f64).ln()) {
        let lambda = log_lambda.exp();
        let grid = mapped();
        let u = sample(&grid, &ts, 1.0, 1.0);
        let v = sample(&grid, &ts, lambda, 1.0);
        let (k0, k1) = (h1dot_norm_sq(&u), h1dot_norm_sq(&v));
        let (p0, p1) = (potential(&u), potential(&v));
        prop_assert!(((k1 - k0) / k0).abs() < 1e-2, "kinetic {k0} vs {k1}");
        prop_assert!(((p1 - p0) / p0).abs() < 1e-2, "potential {p0} vs {p1}");
        for sign in [Sign::Focusing, Sign::Defocusing] {
            let (e0, e1) = (energy(&u, sign), energy(&v, sign));
            prop_assert!((e1 - e0).abs() < 1e-2 * (0.5 * k0 + 0.25 * p0));
        }
    }

    #[test]
    fn hardy_ratio_stays_below_four(ts in terms(4), lambda in 0.5f64..2.0) {
        let u = sample(&mapped(), &ts, lambda, 1.0);
        let h = hardy_ratio(&u).unwrap();
        prop_assert!(h.is_finite() && h <= 4.0 * (1.0 + 1e-6), "ratio {h}");
    }

    #[test]
    fn gaussian_moments_are_exact(k in 0i32..5, a in 0.4f64..3.0) {
        let grid = mapped();
        let u = ComplexField::from_radial(grid, |r| Complex::new(r.powi(k) * (-0.5 * a * r * r).exp(), 0.0));
        // ∫ r^{2k} e^{−a r²} d³x = 2π Γ(k + 3/2) / a^{k+3/2}
        let mut gamma = PI.sqrt() / 2.0;
        for j in 0..k {
            gamma *= j as f64 + 1.5;
        }
        let exact = 2.0 * PI * gamma / a.powf(k as f64 + 1.5);
        let got = weighted_integral(&u, WeightedNormSpec::MASS).unwrap();
        prop_assert!(((got - exact) / exact).abs() < 1e-8, "{got} vs {exact}");
        prop_assert!(((mass(&u) - exact) / exact).abs() < 1e-8);
    }

    #[test]
    fn quotient_obeys_the_sharp_constant(ts in terms(3)) {
        let j = weinstein_quotient(&sample(&mapped(), &ts, 1.0, 1.0)).unwrap();
        prop_assert!(j <= sharp_constant::<f64>() * (1.0 + 1e-6), "J = {j}");
    }

    #[test]
    fn quotient_is_invariant_under_amplitude_and_scale(ts in terms(3), alpha in 0.1f64..10.0, lambda in 0.5f64..2.0) {
        let grid = mapped();
        let j0 = weinstein_quotient(&sample(&grid, &ts, 1.0, 1.0)).unwrap();
        let j1 = weinstein_quotient(&sample(&grid, &ts, lambda, alpha)).unwrap();
        prop_assert!(((j1 - j0) / j0).abs() < 1e-2);
    }

    #[test]
    fn coercive_fraction_dominates_the_bound(ts in terms(3), amp in 0.05f64..3.0) {
        let c = coercivity_margin(&sample(&mapped(), &ts, 1.0, amp)).unwrap();
        prop_assert!(c.fraction >= c.delta_bound - 1e-6, "{c:?}");
    }

    #[test]
    fn defocusing_energy_dominates_half_the_kinetic(ts in terms(3), amp in 0.05f64..3.0) {
        let u = sample(&mapped(), &ts, 1.0, amp);
        prop_assert!(energy(&u, Sign::Defocusing) >= 0.5 * h1dot_norm_sq(&u));
    }

    #[test]
    fn pure_virial_rate_has_closed_form(ts in terms(3), amp in 0.1f64..2.0, chirp in -1.0f64..1.0) {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(3199, 20.0).unwrap());
        let u = ComplexField::from_radial(grid, |r| Complex::from_polar(amp * profile(&ts, r), chirp * r * r));
        let w = VirialWeight::pure();
        let (k, p) = (h1dot_norm_sq(&u), potential(&u));
        for (sign, mu) in [(Sign::Focusing, 1.0), (Sign::Defocusing, -1.0)] {
            let rate = virial_rate(&u, &w, sign);
            let exact = 8.0 * k - 8.0 * mu * p;
            prop_assert!((rate - exact).abs() <= 1e-3 * (8.0 * k + 8.0 * p), "{rate} vs {exact}");
        }
    }

    #[test]
    fn subthreshold_pure_virial_is_coercive(ts in terms(3), amp in 0.05f64..1.0) {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(3199, 20.0).unwrap());
        let u = sample(&grid, &ts, 1.0, amp);
        prop_assume!(subthreshold(&u));
        let c = coercivity_margin(&u).unwrap();
        let k = h1dot_norm_sq(&u);
        let rate = virial_rate(&u, &VirialWeight::pure(), Sign::Focusing);
        prop_assert!(rate >= 8.0 * c.delta_bound * k - 8e-3 * k, "rate {rate}, bound {}", 8.0 * c.delta_bound * k);
    }

    #[test]
    fn localized_virial_error_is_controlled_by_the_tail(ts in terms(3), amp in 0.1f64..1.5, radius in 1.0f64..6.0) {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(1599, 40.0).unwrap());
        let u = ComplexField::from_radial(grid, |r| Complex::from_polar(amp * profile(&ts, r), 0.3 * r));
        let pure = virial_rate(&u, &VirialWeight::pure(), Sign::Focusing);
        let local = virial_rate(&u, &VirialWeight::localized(radius).unwrap(), Sign::Focusing);
        let tail = tightness_tail(&u, radius).total();
        prop_assert!((local - pure).abs() <= 100.0 * tail + 1e-9 * pure.abs(), "gap {} tail {tail}", (local - pure).abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn scattering_verdict_ignores_time_shifts(ts in terms(2), shift in 0.0f64..3.0) {
        let grid = Arc::new(UniformRadialGrid::<f64>::new(511, 30.0).unwrap());
        let u0 = sample(&grid, &ts, 1.0, 1.0);
        let history = |s: f64| {
            let mut h = UnwoundHistory::new(grid.clone());
            for k in 0..12 {
                let t = s + 0.1 * k as f64;
                h.push(t, &free_propagate(&u0, t));
            }
            h
        };
        let opts = ScatterOptions::default();
        let a = scattering_detector(&history(0.0), 0.0, &opts).unwrap();
        let b = scattering_detector(&history(shift), 0.0, &opts).unwrap();
        prop_assert_eq!(a.dispersed, b.dispersed);
        prop_assert!((a.max_deviation - b.max_deviation).abs() < 1e-10);
        prop_assert!(a.dispersed);
    }
}
