use std::cell::Cell;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::l10::L10Accumulator;
use super::scattering::{scattering_detector, ScatterOptions, ScatterVerdict, UnwoundHistory};
use super::tightness::tightness_tail;
use super::virial::{virial_quantity, virial_rate};
use super::weight::VirialWeight;
use crate::error::{LabError, Result};
use crate::grid_fields::{gradient_lp_norm, l10_integrand, mass, outer_mass_fraction, potential, ComplexField, SpectralDomain};
use crate::real::Real;
use crate::solver::{detect, strang_step, DetectorThresholds, SimulationState, Status, StepParams};
use crate::variational::energy_from_parts;

/// One sampled row of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub potential: f64,
    /// `M_a` for the primary virial weight.
    pub virial: f64,
    /// `dM_a/dt` from the virial identity.
    pub virial_rate: f64,
    /// Accumulated `∫∫|u|¹⁰`.
    pub l10: f64,
    /// `‖∇u‖_{L^{30/11}}`.
    pub grad_l30_11: f64,
    /// Share of the tightness integrals beyond the configured radius.
    pub tail_fraction: f64,
    /// Relative `Ḣ¹` distance between this unwound state and the previous one.
    pub deviation: f64,
}

impl DiagnosticsRecord {
    pub const COLUMNS: [&'static str; 11] = [
        "t",
        "mass",
        "energy",
        "kinetic",
        "potential",
        "M_a",
        "rate",
        "l10",
        "grad_l30_11",
        "tail_fraction",
        "deviation",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.t,
            self.mass,
            self.energy,
            self.kinetic,
            self.potential,
            self.virial,
            self.virial_rate,
            self.l10,
            self.grad_l30_11,
            self.tail_fraction,
            self.deviation,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryOptions<T> {
    pub t_final: T,
    /// Steps between samples.
    pub sample_every: usize,
    /// Steps between detector passes in addition to the sampled ones.
    pub detect_every: usize,
    pub thresholds: DetectorThresholds<T>,
    /// Virial weights followed along the run; the first one feeds the records.
    pub weights: Vec<VirialWeight<T>>,
    /// Radius for the tail fraction column.
    pub tightness_radius: T,
    /// Run the scattering detector when the final time is reached.
    pub scatter: Option<ScatterOptions<T>>,
    /// Keep `M_a` at every step so its time derivative can be checked.
    pub virial_checks: bool,
}

impl<T: Real> TrajectoryOptions<T> {
    pub fn new(t_final: T) -> Self {
        Self {
            t_final,
            sample_every: 1,
            detect_every: 1,
            thresholds: DetectorThresholds::default(),
            weights: vec![VirialWeight::pure()],
            tightness_radius: T::lit(10.0),
            scatter: Some(ScatterOptions::default()),
            virial_checks: false,
        }
    }
}

/// Centered time difference of `M_a` against the assembled rate at a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialCheck<T> {
    pub t: T,
    pub finite_difference: T,
    pub rate: T,
}

impl<T: Real> VirialCheck<T> {
    pub fn relative_error(&self) -> T {
        (self.finite_difference - self.rate).abs() / self.rate.abs()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real, G> {
    pub records: Vec<DiagnosticsRecord>,
    pub final_state: SimulationState<T, G>,
    pub l10: L10Accumulator<T>,
    pub scatter: Option<ScatterVerdict<T, G>>,
    /// One list per configured weight.
    pub virial_checks: Vec<Vec<VirialCheck<T>>>,
    pub max_growth: T,
    pub max_fill: T,
    pub dt: T,
}

impl<T: Real, G: SpectralDomain<T>> Trajectory<T, G> {
    pub fn status(&self) -> Status {
        self.final_state.status()
    }
}

/// Time reversal `u ↦ ū`: evolving `ū₀` forward and conjugating gives the
/// backward solution.
pub fn time_reversed<T: Real, G: SpectralDomain<T>>(field: &ComplexField<T, G>) -> ComplexField<T, G> {
    field.conj()
}

struct Sampler<T: Real, G> {
    prev_unwound: Option<Vec<Complex<T>>>,
    history: Option<UnwoundHistory<T, G>>,
    total_tightness: T,
}

/// Advances `u0` to `t_final` with fixed steps, sampling diagnostics and
/// running the detectors. The timestep is shortened so that a whole number
/// of steps lands on `t_final`.
pub fn run_trajectory<T: Real, G: SpectralDomain<T>>(
    u0: ComplexField<T, G>,
    params: &StepParams<T>,
    options: &TrajectoryOptions<T>,
) -> Result<Trajectory<T, G>> {
    if !(options.t_final > T::zero()) {
        return Err(LabError::InvalidParameter(format!("final time must be positive, got {}", options.t_final)));
    }
    if options.sample_every == 0 || options.detect_every == 0 {
        return Err(LabError::InvalidParameter("sampling and detection intervals must be at least 1".into()));
    }
    u0.check_finite()?;
    let steps = (options.t_final / params.dt()).ceil().to_usize().unwrap_or(1).max(1);
    let params = params.with_dt(options.t_final / T::count(steps))?;
    let dt = params.dt();
    let grid = u0.grid().clone();
    let weights = if options.weights.is_empty() { vec![VirialWeight::pure()] } else { options.weights.clone() };
    let primary = weights[0];

    let mut sampler = Sampler {
        prev_unwound: None,
        history: options.scatter.map(|_| UnwoundHistory::new(grid.clone())),
        total_tightness: tightness_tail(&u0, -T::one()).total(),
    };
    let mut state = SimulationState::new(u0);
    let mut l10 = L10Accumulator::new();
    let mut records = Vec::new();
    let mut m_history: Vec<Vec<T>> = vec![Vec::new(); weights.len()];
    let mut sampled: Vec<(usize, T, Vec<T>)> = Vec::new();
    let max_growth = Cell::new(T::zero());
    let max_fill = Cell::new(T::zero());
    let run_detectors = |state: &mut SimulationState<T, G>| {
        let d = detect(state, &options.thresholds);
        state.absorb(d.status);
        if d.growth.is_finite() {
            max_growth.set(max_growth.get().max(d.growth));
        }
        if d.fill.is_finite() {
            max_fill.set(max_fill.get().max(d.fill));
        }
    };

    let mut sample = |state: &mut SimulationState<T, G>, l10: &L10Accumulator<T>| -> Vec<T> {
        run_detectors(state);
        let field = state.field();
        let coeffs = grid.forward(field.values());
        let kinetic = grid.spectral_kinetic(&coeffs);
        let pot = potential(field);
        let mut unwound = coeffs.clone();
        grid.propagate_spectrum(&mut unwound, -state.t());
        let deviation = match &sampler.prev_unwound {
            Some(prev) if kinetic > T::zero() => (grid.spectral_h1_distance_sq(&unwound, prev) / kinetic).sqrt(),
            _ => T::zero(),
        };
        sampler.prev_unwound = Some(unwound);
        if let Some(h) = sampler.history.as_mut() {
            h.push_spectrum(state.t(), coeffs);
        }
        let tail = tightness_tail(field, options.tightness_radius).total();
        let tail_fraction = if sampler.total_tightness > T::zero() { tail / sampler.total_tightness } else { T::zero() };
        let rates: Vec<T> = weights.iter().map(|w| virial_rate(field, w, params.sign())).collect();
        records.push(DiagnosticsRecord {
            t: state.t().as_f64(),
            mass: mass(field).as_f64(),
            energy: energy_from_parts(kinetic, pot, params.sign()).as_f64(),
            kinetic: kinetic.as_f64(),
            potential: pot.as_f64(),
            virial: virial_quantity(field, &primary).as_f64(),
            virial_rate: rates[0].as_f64(),
            l10: l10.total().as_f64(),
            grad_l30_11: gradient_lp_norm(field, T::lit(30.0 / 11.0)).as_f64(),
            tail_fraction: tail_fraction.as_f64(),
            deviation: deviation.as_f64(),
        });
        rates
    };

    l10.push(T::zero(), l10_integrand(state.field()));
    let rates = sample(&mut state, &l10);
    sampled.push((0, state.t(), rates));
    if options.virial_checks {
        for (m, w) in m_history.iter_mut().zip(&weights) {
            m.push(virial_quantity(state.field(), w));
        }
    }
    while !state.status().is_terminal() && state.step() < steps {
        state = strang_step(state, &params);
        if state.status().is_terminal() {
            break;
        }
        l10.push(state.t(), l10_integrand(state.field()));
        if options.virial_checks {
            for (m, w) in m_history.iter_mut().zip(&weights) {
                m.push(virial_quantity(state.field(), w));
            }
        }
        if state.step().is_multiple_of(options.sample_every) || state.step() == steps {
            let rates = sample(&mut state, &l10);
            sampled.push((state.step(), state.t(), rates));
        } else if state.step().is_multiple_of(options.detect_every) {
            run_detectors(&mut state);
        }
    }

    let mut scatter = None;
    if !state.status().is_terminal() {
        let verdict = match (&sampler.history, &options.scatter) {
            (Some(h), Some(opts)) => Some(scattering_detector(h, outer_mass_fraction(state.field()), opts)?),
            _ => None,
        };
        let dispersed = verdict.as_ref().is_some_and(|v| v.dispersed);
        state.absorb(if dispersed { Status::Dispersed } else { Status::TimeExhausted });
        scatter = verdict;
    }

    let virial_checks = (0..weights.len())
        .map(|w| {
            let m = &m_history[w];
            sampled
                .iter()
                .filter(|(k, _, _)| *k >= 1 && k + 1 < m.len())
                .map(|(k, t, rates)| VirialCheck {
                    t: *t,
                    finite_difference: (m[k + 1] - m[k - 1]) / (T::lit(2.0) * dt),
                    rate: rates[w],
                })
                .collect()
        })
        .collect();

    Ok(Trajectory { records, final_state: state, l10, scatter, virial_checks, max_growth: max_growth.get(), max_fill: max_fill.get(), dt })
}
