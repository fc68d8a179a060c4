//! End-to-end acceptance suite. Each criterion runs the corresponding lab
//! experiment with its default configuration, re-checks the reported numbers
//! against closed-form values and prints one `PASS`/`FAIL` line.
//!
//! Runs without the libtest harness so the lines are always visible; the
//! process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use inls_core::lab::summary::ExperimentSummary;
use inls_core::lab::{run_experiment, ExperimentKind, RunConfig};

struct Criterion {
    id: usize,
    title: &'static str,
    budget: Duration,
}

type Check = fn(&ExperimentSummary) -> Outcome;

struct Outcome {
    passed: bool,
    detail: String,
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inls-acceptance-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run(kind: ExperimentKind) -> (ExperimentSummary, Duration) {
    let cfg = RunConfig::defaults(kind);
    let dir = scratch(kind.name());
    let start = Instant::now();
    let summary = run_experiment(&cfg, &dir).unwrap_or_else(|e| panic!("{} failed to run: {e}", kind.name()));
    let elapsed = start.elapsed();
    let _ = std::fs::remove_dir_all(&dir);
    (summary, elapsed)
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn constant(s: &ExperimentSummary, name: &str) -> f64 {
    s.constants
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("constant {name} missing"))
        .measured
}

fn ground_state_constants(s: &ExperimentSummary) -> Outcome {
    let expected = [
        ("kinetic_Q", 8.0 * PI / 3.0),
        ("potential_Q", 8.0 * PI / 3.0),
        ("energy_Q", 2.0 * PI / 3.0),
        ("C1_quotient_Q", 3.0 / (8.0 * PI)),
    ];
    let errs: Vec<f64> = expected.iter().map(|(n, v)| rel(constant(s, n), *v)).collect();
    Outcome {
        passed: errs.iter().all(|e| *e < 5e-3),
        detail: format!("relative errors {}", sci(&errs)),
    }
}

fn elliptic_orders(s: &ExperimentSummary) -> Outcome {
    let orders: Vec<f64> = s
        .constants
        .iter()
        .filter(|r| r.name.starts_with("elliptic_order"))
        .map(|r| r.measured)
        .collect();
    Outcome {
        passed: orders.len() == 2 && orders.iter().all(|p| (p - 2.0).abs() < 0.15),
        detail: format!("observed orders {orders:.3?} over three refinements"),
    }
}

fn ascent(s: &ExperimentSummary) -> Outcome {
    let j = constant(s, "C1_ascent_from_gaussian");
    let err = rel(j, 3.0 / (8.0 * PI));
    Outcome { passed: err < 1e-2, detail: format!("J = {j:.9e}, relative error {err:.2e}") }
}

fn conservation(s: &ExperimentSummary) -> Outcome {
    let r = &s.runs[0];
    let steps = (r.t_final / r.dt).round() as usize;
    Outcome {
        passed: steps >= 1000 && r.mass_drift < 1e-8 && r.energy_drift < 1e-6 && r.status == "dispersed",
        detail: format!("{steps} steps, mass drift {:.2e}, energy drift {:.2e}", r.mass_drift, r.energy_drift),
    }
}

fn virial(s: &ExperimentSummary) -> Outcome {
    let r = &s.runs[0];
    Outcome {
        passed: r.subthreshold_initial && r.virial_errors.len() == 2 && r.virial_errors.iter().all(|e| *e < 0.03),
        detail: format!(
            "worst relative errors pure {:.2e}, localized {:.2e} (R = {:.3})",
            r.virial_errors.first().copied().unwrap_or(f64::NAN),
            r.virial_errors.get(1).copied().unwrap_or(f64::NAN),
            r.virial_radius.unwrap_or(f64::NAN)
        ),
    }
}

fn coercivity(s: &ExperimentSummary) -> Outcome {
    let r = &s.runs[0];
    Outcome {
        passed: r.subthreshold_initial && r.kinetic_below_threshold && r.coercivity_slack >= -1e-3,
        detail: format!("kinetic below 8pi/3: {}, smallest slack {:.3e}", r.kinetic_below_threshold, r.coercivity_slack),
    }
}

fn dichotomy(s: &ExperimentSummary) -> Outcome {
    let Some(b) = &s.bracket else {
        return Outcome { passed: false, detail: "no bracket".into() };
    };
    let base = |a: f64| s.runs.iter().rev().find(|r| r.amplitude == a && !r.id.ends_with("_refined"));
    let fine = |a: f64| s.runs.iter().rev().find(|r| r.amplitude == a && r.id.ends_with("_refined"));
    let low_ok = base(b.low).is_some_and(|r| {
        r.status == "dispersed" && r.scatter_deviation.is_some_and(|d| d < 1e-3) && r.l10_late_growth < 0.01
    });
    let high_ok = base(b.high).is_some_and(|r| r.status == "blowup_suspected")
        && fine(b.high).is_some_and(|r| r.status == "blowup_suspected");
    Outcome {
        passed: low_ok && high_ok && b.low < b.high,
        detail: format!(
            "bracket [{:.4}, {:.4}], low scatters: {low_ok}, high blows up at two resolutions: {high_ok}, {} runs",
            b.low,
            b.high,
            s.runs.len()
        ),
    }
}

fn far_center(s: &ExperimentSummary) -> Outcome {
    let centers: Vec<f64> = s.sweep.iter().map(|r| r.center).collect();
    let devs: Vec<f64> = s.sweep.iter().map(|r| r.deviation.unwrap_or(f64::NAN)).collect();
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    let ratio = devs.last().copied().unwrap_or(f64::NAN) / devs[0];
    Outcome {
        passed: centers == [0.0, 5.0, 10.0, 20.0] && monotone && ratio < 0.25,
        detail: format!("deviations {}, far/center ratio {ratio:.3}", sci(&devs)),
    }
}

fn defocusing(s: &ExperimentSummary) -> Outcome {
    let amplitudes: Vec<f64> = {
        let mut v: Vec<f64> = s.runs.iter().map(|r| r.amplitude).collect();
        v.dedup();
        v
    };
    let ok = |a: f64, dir: &str| {
        s.runs
            .iter()
            .find(|r| r.amplitude == a && r.direction == dir)
            .is_some_and(|r| r.status == "dispersed" && r.l10_late_growth < 0.01)
    };
    let both: Vec<bool> = amplitudes.iter().map(|&a| ok(a, "forward") && ok(a, "backward")).collect();
    Outcome {
        passed: s.sign == "defocusing" && both.len() >= 2 && both.iter().all(|b| *b),
        detail: format!("amplitudes {amplitudes:?} disperse both ways: {both:?}"),
    }
}

fn report(c: &Criterion, o: &Outcome, elapsed: Duration) -> bool {
    let in_time = elapsed <= c.budget;
    let passed = o.passed && in_time;
    println!(
        "criterion {} {}: {} ({}; {:.1} s of {} s)",
        c.id,
        c.title,
        if passed { "PASS" } else { "FAIL" },
        o.detail,
        elapsed.as_secs_f64(),
        c.budget.as_secs()
    );
    passed
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut all = true;

    let (constants, t_const) = run(ExperimentKind::Constants);
    let (single, t_single) = run(ExperimentKind::SingleRun);
    let groups: [(Criterion, &ExperimentSummary, Duration, Check); 6] = [
        (Criterion { id: 1, title: "ground-state constants", budget: secs(10) }, &constants, t_const, ground_state_constants),
        (Criterion { id: 2, title: "elliptic residual order", budget: secs(10) }, &constants, t_const, elliptic_orders),
        (Criterion { id: 3, title: "ascent recovers C1", budget: secs(60) }, &constants, t_const, ascent),
        (Criterion { id: 4, title: "conservation", budget: secs(60) }, &single, t_single, conservation),
        (Criterion { id: 5, title: "virial consistency", budget: secs(300) }, &single, t_single, virial),
        (Criterion { id: 6, title: "coercivity along the flow", budget: secs(300) }, &single, t_single, coercivity),
    ];
    for (c, s, t, check) in groups {
        all &= report(&c, &check(s), t);
    }

    let slow: [(Criterion, ExperimentKind, Check); 3] = [
        (Criterion { id: 7, title: "dichotomy bracket", budget: secs(1800) }, ExperimentKind::Dichotomy, dichotomy),
        (Criterion { id: 8, title: "far-center decay", budget: secs(1800) }, ExperimentKind::Farcenter, far_center),
        (Criterion { id: 9, title: "defocusing scattering", budget: secs(900) }, ExperimentKind::Defocusing, defocusing),
    ];
    for (c, kind, check) in slow {
        let (s, t) = run(kind);
        all &= report(&c, &check(&s), t);
    }

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
