use std::path::Path;

use crate::lab::config::{InitialData, RunConfig};
use crate::lab::error::RunError;
use crate::lab::runs::{run_case, Case, L10_SATURATION};
use crate::lab::setup::{initial_field, spectral_grid, SpectralGrid};
use crate::lab::summary::{Assertion, Bracket, RunVerdict};
use crate::solver::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Scatter,
    Blowup,
    Indeterminate,
}

pub struct DichotomyOutcome {
    pub runs: Vec<RunVerdict>,
    pub bracket: Bracket,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
}

struct Classifier<'a> {
    cfg: RunConfig,
    refined: RunConfig,
    out_dir: &'a Path,
    runs: Vec<RunVerdict>,
}

impl Classifier<'_> {
    fn run(&mut self, amplitude: f64, refined: bool) -> Result<RunVerdict, RunError> {
        let cfg = if refined { &self.refined } else { &self.cfg };
        let mut c = cfg.clone();
        if let InitialData::Gaussian { amplitude: a, .. } = &mut c.data {
            *a = amplitude;
        }
        let id = format!("dichotomy_{:03}_{}{}", self.runs.len(), amplitude, if refined { "_refined" } else { "" });
        let case = Case { id, amplitude, direction: "forward", cfg: &c, out_dir: self.out_dir, virial_checks: c.params.virial_checks };
        let verdict = match spectral_grid(&c.grid)? {
            SpectralGrid::Radial(g) => run_case(&case, initial_field(&c.data, g)?)?.0,
            SpectralGrid::Cartesian(g) => run_case(&case, initial_field(&c.data, g)?)?.0,
        };
        self.runs.push(verdict.clone());
        Ok(verdict)
    }

    /// Scatter needs a dispersed status with a saturated accumulator; blowup
    /// needs the flag at the base and at the refined resolution.
    fn classify(&mut self, amplitude: f64) -> Result<Verdict, RunError> {
        let base = self.run(amplitude, false)?;
        if base.status == Status::Dispersed.as_str() && base.l10_late_growth < L10_SATURATION {
            return Ok(Verdict::Scatter);
        }
        if base.status == Status::BlowupSuspected.as_str() {
            let fine = self.run(amplitude, true)?;
            if fine.status == Status::BlowupSuspected.as_str() {
                return Ok(Verdict::Blowup);
            }
        }
        Ok(Verdict::Indeterminate)
    }
}

fn last_base(runs: &[RunVerdict], amplitude: f64) -> Option<&RunVerdict> {
    runs.iter().rev().find(|r| r.amplitude == amplitude && !r.id.ends_with("_refined"))
}

pub fn run_dichotomy(cfg: &RunConfig, out_dir: &Path) -> Result<DichotomyOutcome, RunError> {
    if !matches!(cfg.data, InitialData::Gaussian { .. }) {
        return Err(RunError::config("the dichotomy bisection needs the gaussian data family"));
    }
    let refined = cfg.with_resolution_scale(cfg.params.refinement as f64)?;
    let mut c = Classifier { cfg: cfg.clone(), refined, out_dir, runs: Vec::new() };
    let p = &cfg.params;
    let mut notes = Vec::new();
    let (mut lo, mut hi) = (p.amplitude_low, p.amplitude_high);
    let mut lo_v = c.classify(lo)?;
    let mut hi_v = c.classify(hi)?;
    let mut widenings = 0;
    while (lo_v != Verdict::Scatter || hi_v != Verdict::Blowup) && widenings < p.max_widenings {
        widenings += 1;
        if lo_v != Verdict::Scatter {
            lo *= 0.5;
            notes.push(format!("low endpoint did not scatter; widened to {lo}"));
            lo_v = c.classify(lo)?;
        }
        if hi_v != Verdict::Blowup {
            hi *= 1.5;
            notes.push(format!("high endpoint was not confirmed as blowup; widened to {hi}"));
            hi_v = c.classify(hi)?;
        }
    }
    let consistent = lo_v == Verdict::Scatter && hi_v == Verdict::Blowup;
    let mut bisections = 0;
    let mut stopped_early = None;
    if consistent {
        while hi - lo > p.bracket_tolerance && bisections < p.max_bisections {
            bisections += 1;
            let mid = 0.5 * (lo + hi);
            match c.classify(mid)? {
                Verdict::Scatter => lo = mid,
                Verdict::Blowup => hi = mid,
                Verdict::Indeterminate => {
                    let status = last_base(&c.runs, mid).map_or("unknown", |r| r.status.as_str()).to_string();
                    stopped_early = Some(format!("amplitude {mid} was indeterminate ({status}); bracket kept"));
                    break;
                }
            }
        }
    } else {
        notes.push("endpoints still carry the same or undetermined verdicts after widening".into());
    }

    let low_run = last_base(&c.runs, lo).cloned();
    let high_run = last_base(&c.runs, hi).cloned();
    let high_fine = c.runs.iter().rev().find(|r| r.amplitude == hi && r.id.ends_with("_refined")).cloned();
    let status_of = |r: &Option<RunVerdict>| r.as_ref().map_or("missing".to_string(), |r| r.status.clone());
    let bracket = Bracket {
        low: lo,
        high: hi,
        low_status: status_of(&low_run),
        high_status: status_of(&high_run),
        high_confirmed: hi_v == Verdict::Blowup,
        width: hi - lo,
        bisections,
        widenings,
        stopped_early: stopped_early.clone(),
    };
    if let Some(s) = stopped_early {
        notes.push(s);
    }

    let tol = cfg.detect.scatter.tolerance;
    let mut assertions = vec![Assertion::new(
        "bracket endpoints carry opposite verdicts",
        consistent && lo < hi,
        format!("[{lo}, {hi}] with {} / {}", bracket.low_status, bracket.high_status),
    )];
    let (dev, late) = low_run.as_ref().map_or((None, f64::INFINITY), |r| (r.scatter_deviation, r.l10_late_growth));
    assertions.push(Assertion::new(
        "low endpoint is Cauchy in H1 within the scatter tolerance",
        dev.is_some_and(|d| d < tol),
        format!("trailing deviation {dev:?} vs {tol:e}"),
    ));
    assertions.push(Assertion::new(
        "low endpoint has a saturated L10 accumulator",
        late < L10_SATURATION,
        format!("late growth {late:e}"),
    ));
    assertions.push(Assertion::new(
        "high endpoint flagged blowup at two resolutions",
        high_run.as_ref().is_some_and(|r| r.status == Status::BlowupSuspected.as_str())
            && high_fine.as_ref().is_some_and(|r| r.status == Status::BlowupSuspected.as_str()),
        format!(
            "base {} (h = {:e}), refined {} (h = {:e})",
            status_of(&high_run),
            high_run.as_ref().map_or(f64::NAN, |r| r.spacing),
            status_of(&high_fine),
            high_fine.as_ref().map_or(f64::NAN, |r| r.spacing),
        ),
    ));
    let persistent = c
        .runs
        .iter()
        .filter(|r| r.status == Status::Dispersed.as_str() && r.subthreshold_initial)
        .all(|r| r.kinetic_below_threshold);
    assertions.push(Assertion::new(
        "sub-threshold scattering runs stay below the kinetic threshold",
        persistent,
        format!(
            "{} scattering runs, {} sub-threshold at t = 0",
            c.runs.iter().filter(|r| r.status == Status::Dispersed.as_str()).count(),
            c.runs.iter().filter(|r| r.status == Status::Dispersed.as_str() && r.subthreshold_initial).count()
        ),
    ));
    Ok(DichotomyOutcome { runs: c.runs, bracket, assertions, notes })
}
