use serde::{Deserialize, Serialize};

/// Version tag of the JSON summary.
pub const SUMMARY_FORMAT: &str = "inls-lab summary v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Verdict and bookkeeping of one trajectory, with the tolerances and
/// resolution it was run at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunVerdict {
    pub id: String,
    pub amplitude: f64,
    pub direction: String,
    pub status: String,
    pub points: usize,
    pub spacing: f64,
    pub dt: f64,
    pub t_final: f64,
    pub t_end: f64,
    pub growth_factor: f64,
    pub spectral_fill: f64,
    pub scatter_tolerance: f64,
    pub scatter_window: f64,
    pub max_growth: f64,
    pub max_fill: f64,
    pub scatter_deviation: Option<f64>,
    pub radiation_clean: Option<bool>,
    pub l10_total: f64,
    pub l10_late_growth: f64,
    pub subthreshold_initial: bool,
    /// Every sample had kinetic energy below `‖∇Q‖²`.
    pub kinetic_below_threshold: bool,
    /// Smallest `(K − P) − (1 − C₁K)K` over the samples.
    pub coercivity_slack: f64,
    pub mass_drift: f64,
    pub energy_drift: f64,
    /// Largest relative error of the virial time-difference check, per weight.
    pub virial_errors: Vec<f64>,
    pub virial_radius: Option<f64>,
    pub records: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub low: f64,
    pub high: f64,
    pub low_status: String,
    pub high_status: String,
    pub high_confirmed: bool,
    pub width: f64,
    pub bisections: usize,
    pub widenings: usize,
    pub stopped_early: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub measured: f64,
    pub exact: Option<f64>,
    pub relative_error: Option<f64>,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub center: f64,
    pub deviation: Option<f64>,
    pub status: String,
    pub outer_mass_fraction: Option<f64>,
    pub steps: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub started_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub format: String,
    pub experiment: String,
    pub seed: u64,
    pub sign: String,
    /// Canonical text of the configuration that produced the summary.
    pub config: String,
    pub runs: Vec<RunVerdict>,
    pub bracket: Option<Bracket>,
    pub constants: Vec<ConstantRow>,
    pub sweep: Vec<SweepRow>,
    pub assertions: Vec<Assertion>,
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl ExperimentSummary {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}
