//! Run configuration: a line-oriented `key = value` format with one level of
//! `[sections]` and `#` comments.
//!
//! ```text
//! [run]
//! experiment = dichotomy
//! sign = focusing
//! seed = 7
//!
//! [grid]
//! kind = radial
//! points = 2999
//! extent = 60
//! ```
//!
//! Missing keys take the defaults of the experiment kind. Every error names
//! the offending line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::solver::DetectorThresholds;
use crate::variational::Sign;
use crate::diagnostics::ScatterOptions;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based line number, 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Constants,
    Dichotomy,
    Farcenter,
    Defocusing,
    SingleRun,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Constants,
        ExperimentKind::Dichotomy,
        ExperimentKind::Farcenter,
        ExperimentKind::Defocusing,
        ExperimentKind::SingleRun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Constants => "constants",
            ExperimentKind::Dichotomy => "dichotomy",
            ExperimentKind::Farcenter => "farcenter",
            ExperimentKind::Defocusing => "defocusing",
            ExperimentKind::SingleRun => "single-run",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// Uniform radial grid with `points` interior nodes on `(0, extent)`.
    Radial { points: usize, extent: f64 },
    /// Mapped Gauss–Legendre radial grid, optionally truncated at `r_max`.
    Mapped { panels: usize, order: usize, scale: f64, r_max: Option<f64>, tail_correction: bool },
    /// Periodic box `[−extent, extent)³` with `points` nodes per axis.
    Cartesian { points: usize, extent: f64 },
}

impl GridSpec {
    fn kind(&self) -> &'static str {
        match self {
            GridSpec::Radial { .. } => "radial",
            GridSpec::Mapped { .. } => "mapped",
            GridSpec::Cartesian { .. } => "cartesian",
        }
    }

    fn default_for(kind: &str) -> Option<Self> {
        match kind {
            "radial" => Some(GridSpec::Radial { points: 1599, extent: 40.0 }),
            "mapped" => Some(GridSpec::Mapped { panels: 16, order: 6, scale: 1.0, r_max: None, tail_correction: true }),
            "cartesian" => Some(GridSpec::Cartesian { points: 64, extent: 16.0 }),
            _ => None,
        }
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            GridSpec::Radial { .. } | GridSpec::Cartesian { .. } => &["kind", "points", "extent"],
            GridSpec::Mapped { .. } => &["kind", "panels", "order", "scale", "r_max", "tail_correction"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = c·h²`
    Cfl(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    pub t_final: f64,
    pub step: TimeStep,
    pub sample_interval: f64,
    /// `None` selects the grid default (on for boxes, off for radial grids).
    pub dealias: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `A·exp(−|x − x₀|²/w²)·exp(iβ|x − x₀|²)`
    Gaussian { amplitude: f64, width: f64, center: [f64; 3], chirp: f64 },
    /// `factor·λ^{1/2}Q(λx)`
    RescaledQ { factor: f64, lambda: f64 },
    /// Radial profile read from a whitespace-separated `r re [im]` file.
    Samples { file: PathBuf },
}

impl InitialData {
    fn family(&self) -> &'static str {
        match self {
            InitialData::Gaussian { .. } => "gaussian",
            InitialData::RescaledQ { .. } => "rescaled_q",
            InitialData::Samples { .. } => "samples",
        }
    }

    fn default_for(family: &str) -> Option<Self> {
        match family {
            "gaussian" => Some(InitialData::Gaussian { amplitude: 0.5, width: 1.0, center: [0.0; 3], chirp: 0.0 }),
            "rescaled_q" => Some(InitialData::RescaledQ { factor: 1.0, lambda: 1.0 }),
            "samples" => Some(InitialData::Samples { file: PathBuf::new() }),
            _ => None,
        }
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            InitialData::Gaussian { .. } => &["family", "amplitude", "width", "center", "chirp"],
            InitialData::RescaledQ { .. } => &["family", "factor", "lambda"],
            InitialData::Samples { .. } => &["family", "file"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectSpec {
    pub thresholds: DetectorThresholds<f64>,
    pub scatter: ScatterOptions<f64>,
}

/// Parameters read by the individual experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub amplitude_low: f64,
    pub amplitude_high: f64,
    pub bracket_tolerance: f64,
    pub max_bisections: usize,
    pub max_widenings: usize,
    /// Refinement factor of the confirming run for blowup verdicts.
    pub refinement: usize,
    pub centers: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub chirps: Vec<f64>,
    pub hardy_samples: usize,
    pub virial_checks: bool,
    /// Horizon of the time-reversal round trip in the defocusing suite.
    pub reversal_time: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            amplitude_low: 0.01,
            amplitude_high: 1.684,
            bracket_tolerance: 0.05,
            max_bisections: 12,
            max_widenings: 3,
            refinement: 2,
            centers: vec![0.0, 5.0, 10.0, 20.0],
            amplitudes: vec![1.0, 5.0],
            chirps: vec![0.5, 0.0],
            hardy_samples: 16,
            virial_checks: true,
            reversal_time: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub sign: Sign,
    pub seed: u64,
    pub output: PathBuf,
    pub grid: GridSpec,
    pub time: TimeSpec,
    pub data: InitialData,
    pub detect: DetectSpec,
    pub params: ExperimentSpec,
}

const SECTIONS: [&str; 6] = ["run", "grid", "time", "data", "detect", "experiment"];
const RUN_KEYS: [&str; 4] = ["experiment", "sign", "seed", "output"];
const TIME_KEYS: [&str; 5] = ["t_final", "dt", "cfl", "sample_interval", "dealias"];
const DETECT_KEYS: [&str; 5] = ["growth_factor", "spectral_fill", "scatter_tolerance", "scatter_window", "radiation_limit"];
const EXPERIMENT_KEYS: [&str; 12] = [
    "amplitude_low",
    "amplitude_high",
    "bracket_tolerance",
    "max_bisections",
    "max_widenings",
    "refinement",
    "centers",
    "amplitudes",
    "chirps",
    "hardy_samples",
    "virial_checks",
    "reversal_time",
];

impl RunConfig {
    /// Defaults tuned for each experiment.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let base = RunConfig {
            experiment: kind,
            sign: Sign::Focusing,
            seed: 1,
            output: PathBuf::from("results"),
            grid: GridSpec::Radial { points: 1599, extent: 40.0 },
            time: TimeSpec { t_final: 1.0, step: TimeStep::Cfl(0.5), sample_interval: 0.05, dealias: None },
            data: InitialData::Gaussian { amplitude: 0.5, width: 1.0, center: [0.0; 3], chirp: 0.0 },
            detect: DetectSpec::default(),
            params: ExperimentSpec::default(),
        };
        match kind {
            ExperimentKind::SingleRun => base,
            ExperimentKind::Constants => RunConfig {
                grid: GridSpec::Mapped { panels: 16, order: 6, scale: 1.0, r_max: None, tail_correction: true },
                data: InitialData::Gaussian { amplitude: 1.0, width: 1.0, center: [0.0; 3], chirp: 0.0 },
                ..base
            },
            ExperimentKind::Dichotomy => RunConfig {
                grid: GridSpec::Radial { points: 2999, extent: 60.0 },
                time: TimeSpec { t_final: 5.0, sample_interval: 0.1, ..base.time.clone() },
                detect: DetectSpec {
                    thresholds: DetectorThresholds { growth_factor: 3.0, spectral_fill: 0.1 },
                    ..DetectSpec::default()
                },
                params: ExperimentSpec { virial_checks: false, ..ExperimentSpec::default() },
                ..base
            },
            ExperimentKind::Farcenter => RunConfig {
                grid: GridSpec::Cartesian { points: 128, extent: 24.0 },
                data: InitialData::Gaussian { amplitude: 0.6, width: 1.5, center: [0.0; 3], chirp: 0.0 },
                ..base
            },
            ExperimentKind::Defocusing => RunConfig {
                sign: Sign::Defocusing,
                grid: GridSpec::Radial { points: 2999, extent: 120.0 },
                time: TimeSpec { t_final: 6.0, sample_interval: 0.1, ..base.time.clone() },
                data: InitialData::Gaussian { amplitude: 1.0, width: 1.0, center: [0.0; 3], chirp: 0.0 },
                params: ExperimentSpec { virial_checks: false, ..ExperimentSpec::default() },
                ..base
            },
        }
    }

    /// Canonical text form; `parse_config(cfg.to_text())` returns `cfg`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = fmt_f64;
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "experiment = {}", self.experiment);
        let _ = writeln!(s, "sign = {}", self.sign);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "output = {}", self.output.display());
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "kind = {}", self.grid.kind());
        match &self.grid {
            GridSpec::Radial { points, extent } | GridSpec::Cartesian { points, extent } => {
                let _ = writeln!(s, "points = {points}\nextent = {}", f(*extent));
            }
            GridSpec::Mapped { panels, order, scale, r_max, tail_correction } => {
                let _ = writeln!(s, "panels = {panels}\norder = {order}\nscale = {}", f(*scale));
                if let Some(r) = r_max {
                    let _ = writeln!(s, "r_max = {}", f(*r));
                }
                let _ = writeln!(s, "tail_correction = {tail_correction}");
            }
        }
        let _ = writeln!(s, "\n[time]");
        let _ = writeln!(s, "t_final = {}", f(self.time.t_final));
        match self.time.step {
            TimeStep::Fixed(dt) => {
                let _ = writeln!(s, "dt = {}", f(dt));
            }
            TimeStep::Cfl(c) => {
                let _ = writeln!(s, "cfl = {}", f(c));
            }
        }
        let _ = writeln!(s, "sample_interval = {}", f(self.time.sample_interval));
        if let Some(d) = self.time.dealias {
            let _ = writeln!(s, "dealias = {d}");
        }
        let _ = writeln!(s, "\n[data]");
        let _ = writeln!(s, "family = {}", self.data.family());
        match &self.data {
            InitialData::Gaussian { amplitude, width, center, chirp } => {
                let _ = writeln!(s, "amplitude = {}\nwidth = {}", f(*amplitude), f(*width));
                let _ = writeln!(s, "center = {}", fmt_list(center));
                let _ = writeln!(s, "chirp = {}", f(*chirp));
            }
            InitialData::RescaledQ { factor, lambda } => {
                let _ = writeln!(s, "factor = {}\nlambda = {}", f(*factor), f(*lambda));
            }
            InitialData::Samples { file } => {
                let _ = writeln!(s, "file = {}", file.display());
            }
        }
        let d = &self.detect;
        let _ = writeln!(s, "\n[detect]");
        let _ = writeln!(s, "growth_factor = {}", f(d.thresholds.growth_factor));
        let _ = writeln!(s, "spectral_fill = {}", f(d.thresholds.spectral_fill));
        let _ = writeln!(s, "scatter_tolerance = {}", f(d.scatter.tolerance));
        let _ = writeln!(s, "scatter_window = {}", f(d.scatter.window));
        let _ = writeln!(s, "radiation_limit = {}", f(d.scatter.radiation_limit));
        let p = &self.params;
        let _ = writeln!(s, "\n[experiment]");
        let _ = writeln!(s, "amplitude_low = {}", f(p.amplitude_low));
        let _ = writeln!(s, "amplitude_high = {}", f(p.amplitude_high));
        let _ = writeln!(s, "bracket_tolerance = {}", f(p.bracket_tolerance));
        let _ = writeln!(s, "max_bisections = {}", p.max_bisections);
        let _ = writeln!(s, "max_widenings = {}", p.max_widenings);
        let _ = writeln!(s, "refinement = {}", p.refinement);
        let _ = writeln!(s, "centers = {}", fmt_list(&p.centers));
        let _ = writeln!(s, "amplitudes = {}", fmt_list(&p.amplitudes));
        let _ = writeln!(s, "chirps = {}", fmt_list(&p.chirps));
        let _ = writeln!(s, "hardy_samples = {}", p.hardy_samples);
        let _ = writeln!(s, "virial_checks = {}", p.virial_checks);
        let _ = writeln!(s, "reversal_time = {}", f(p.reversal_time));
        s
    }

    /// Multiplies the resolution by `factor`: node counts scale linearly
    /// (box sizes to the nearest power of two) and a fixed `dt` by `1/factor²`.
    pub fn with_resolution_scale(&self, factor: f64) -> Result<Self, ConfigError> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(ConfigError::at(0, format!("resolution scale must be positive, got {factor}")));
        }
        let mut out = self.clone();
        let scale_count = |n: usize| ((n as f64) * factor).round().max(1.0) as usize;
        out.grid = match &self.grid {
            GridSpec::Radial { points, extent } => {
                GridSpec::Radial { points: (((points + 1) as f64) * factor).round().max(5.0) as usize - 1, extent: *extent }
            }
            GridSpec::Mapped { panels, order, scale, r_max, tail_correction } => GridSpec::Mapped {
                panels: scale_count(*panels),
                order: *order,
                scale: *scale,
                r_max: *r_max,
                tail_correction: *tail_correction,
            },
            GridSpec::Cartesian { points, extent } => {
                let target = (*points as f64 * factor).max(4.0);
                let p = 2f64.powf(target.log2().round()) as usize;
                GridSpec::Cartesian { points: p, extent: *extent }
            }
        };
        if let TimeStep::Fixed(dt) = self.time.step {
            out.time.step = TimeStep::Fixed(dt / (factor * factor));
        }
        Ok(out)
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", ")
}

struct Entry {
    line: usize,
    value: String,
}

type Entries = BTreeMap<(String, String), Entry>;

fn allowed(section: &str) -> &'static [&'static str] {
    match section {
        "run" => &RUN_KEYS,
        "time" => &TIME_KEYS,
        "detect" => &DETECT_KEYS,
        "experiment" => &EXPERIMENT_KEYS,
        // grid and data keys depend on the selected kind and are checked later
        "grid" => &["kind", "points", "extent", "panels", "order", "scale", "r_max", "tail_correction"],
        "data" => &["family", "amplitude", "width", "center", "chirp", "factor", "lambda", "file"],
        _ => &[],
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut entries = Entries::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, format!("malformed section header `{content}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::at(line, format!("unknown section [{name}]")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section
            .as_deref()
            .ok_or_else(|| ConfigError::at(line, format!("key `{key}` appears before any [section]")))?;
        if key.is_empty() {
            return Err(ConfigError::at(line, "empty key"));
        }
        if !allowed(sec).contains(&key) {
            return Err(ConfigError::at(line, format!("unknown key `{key}` in section [{sec}]")));
        }
        let slot = (sec.to_string(), key.to_string());
        if let Some(prev) = entries.get(&slot) {
            return Err(ConfigError::at(line, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
        entries.insert(slot, Entry { line, value: value.to_string() });
    }
    Ok(entries)
}

struct Reader {
    entries: Entries,
}

impl Reader {
    fn take(&mut self, section: &str, key: &str) -> Option<Entry> {
        self.entries.remove(&(section.to_string(), key.to_string()))
    }

    fn parse_with<V>(
        &mut self,
        section: &str,
        key: &str,
        what: &str,
        f: impl Fn(&str) -> Option<V>,
    ) -> Result<Option<(V, usize)>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some(e) => f(&e.value)
                .map(|v| Some((v, e.line)))
                .ok_or_else(|| ConfigError::at(e.line, format!("invalid value `{}` for `{key}`: expected {what}", e.value))),
        }
    }

    fn real(&mut self, section: &str, key: &str, slot: &mut f64, check: Check) -> Result<(), ConfigError> {
        if let Some((v, line)) = self.parse_with(section, key, "a number", |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))? {
            check.apply(v, key, line)?;
            *slot = v;
        }
        Ok(())
    }

    fn count(&mut self, section: &str, key: &str, slot: &mut usize, min: usize) -> Result<(), ConfigError> {
        if let Some((v, line)) = self.parse_with(section, key, "a nonnegative integer", |s| s.parse::<usize>().ok())? {
            if v < min {
                return Err(ConfigError::at(line, format!("`{key}` must be at least {min}, got {v}")));
            }
            *slot = v;
        }
        Ok(())
    }

    fn flag(&mut self, section: &str, key: &str) -> Result<Option<bool>, ConfigError> {
        Ok(self.parse_with(section, key, "true or false", |s| s.parse::<bool>().ok())?.map(|(v, _)| v))
    }

    fn list(&mut self, section: &str, key: &str) -> Result<Option<(Vec<f64>, usize)>, ConfigError> {
        self.parse_with(section, key, "a comma-separated list of numbers", |s| {
            s.split(',').map(|t| t.trim().parse::<f64>().ok().filter(|v| v.is_finite())).collect()
        })
    }
}

#[derive(Clone, Copy)]
enum Check {
    Positive,
    NonNegative,
    Any,
    AboveOne,
    UnitInterval,
}

impl Check {
    fn apply(self, v: f64, key: &str, line: usize) -> Result<(), ConfigError> {
        let ok = match self {
            Check::Positive => v > 0.0,
            Check::NonNegative => v >= 0.0,
            Check::Any => true,
            Check::AboveOne => v > 1.0,
            Check::UnitInterval => v > 0.0 && v <= 1.0,
        };
        if ok {
            return Ok(());
        }
        let need = match self {
            Check::Positive => "positive",
            Check::NonNegative => "nonnegative",
            Check::Any => unreachable!(),
            Check::AboveOne => "greater than 1",
            Check::UnitInterval => "in (0, 1]",
        };
        Err(ConfigError::at(line, format!("`{key}` must be {need}, got {v}")))
    }
}

/// Parses a configuration. The experiment kind comes from `[run] experiment`
/// (default `single-run`).
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_for(text, None)
}

/// Like [`parse_config`], with the experiment kind fixed by the caller; a
/// conflicting `experiment` key is an error.
pub fn parse_config_for(text: &str, forced: Option<ExperimentKind>) -> Result<RunConfig, ConfigError> {
    let mut r = Reader { entries: tokenize(text)? };
    let kind = match (r.take("run", "experiment"), forced) {
        (None, None) => ExperimentKind::SingleRun,
        (None, Some(k)) => k,
        (Some(e), forced) => {
            let k = ExperimentKind::parse(&e.value)
                .ok_or_else(|| ConfigError::at(e.line, format!("unknown experiment `{}`", e.value)))?;
            if let Some(f) = forced.filter(|f| *f != k) {
                return Err(ConfigError::at(e.line, format!("config is for experiment `{k}` but `{f}` was requested")));
            }
            k
        }
    };
    let mut cfg = RunConfig::defaults(kind);

    if let Some(e) = r.take("run", "sign") {
        cfg.sign = match e.value.as_str() {
            "focusing" | "+1" => Sign::Focusing,
            "defocusing" | "-1" => Sign::Defocusing,
            other => return Err(ConfigError::at(e.line, format!("invalid value `{other}` for `sign`: expected focusing or defocusing"))),
        };
    }
    if let Some((v, _)) = r.parse_with("run", "seed", "a nonnegative integer", |s| s.parse::<u64>().ok())? {
        cfg.seed = v;
    }
    if let Some(e) = r.take("run", "output") {
        cfg.output = PathBuf::from(e.value);
    }

    read_grid(&mut r, &mut cfg)?;
    read_time(&mut r, &mut cfg)?;
    read_data(&mut r, &mut cfg)?;

    let d = &mut cfg.detect;
    r.real("detect", "growth_factor", &mut d.thresholds.growth_factor, Check::AboveOne)?;
    r.real("detect", "spectral_fill", &mut d.thresholds.spectral_fill, Check::UnitInterval)?;
    r.real("detect", "scatter_tolerance", &mut d.scatter.tolerance, Check::Positive)?;
    r.real("detect", "scatter_window", &mut d.scatter.window, Check::UnitInterval)?;
    r.real("detect", "radiation_limit", &mut d.scatter.radiation_limit, Check::UnitInterval)?;

    let p = &mut cfg.params;
    r.real("experiment", "amplitude_low", &mut p.amplitude_low, Check::Positive)?;
    r.real("experiment", "amplitude_high", &mut p.amplitude_high, Check::Positive)?;
    r.real("experiment", "bracket_tolerance", &mut p.bracket_tolerance, Check::Positive)?;
    r.count("experiment", "max_bisections", &mut p.max_bisections, 0)?;
    r.count("experiment", "max_widenings", &mut p.max_widenings, 0)?;
    r.count("experiment", "refinement", &mut p.refinement, 2)?;
    r.count("experiment", "hardy_samples", &mut p.hardy_samples, 0)?;
    r.real("experiment", "reversal_time", &mut p.reversal_time, Check::Positive)?;
    if let Some(v) = r.flag("experiment", "virial_checks")? {
        p.virial_checks = v;
    }
    for (key, slot, check) in [
        ("centers", &mut p.centers, Check::NonNegative),
        ("amplitudes", &mut p.amplitudes, Check::NonNegative),
        ("chirps", &mut p.chirps, Check::Any),
    ] {
        if let Some((v, line)) = r.list("experiment", key)? {
            for x in &v {
                check.apply(*x, key, line)?;
            }
            *slot = v;
        }
    }
    if p.amplitude_low >= p.amplitude_high {
        return Err(ConfigError::at(0, "amplitude_low must be below amplitude_high"));
    }
    if !p.chirps.is_empty() && p.chirps.len() != p.amplitudes.len() {
        return Err(ConfigError::at(0, "chirps must be empty or match amplitudes in length"));
    }
    debug_assert!(r.entries.is_empty(), "unconsumed keys {:?}", r.entries.keys().collect::<Vec<_>>());
    Ok(cfg)
}

fn read_grid(r: &mut Reader, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if let Some(e) = r.take("grid", "kind") {
        if e.value != cfg.grid.kind() {
            cfg.grid = GridSpec::default_for(&e.value).ok_or_else(|| {
                ConfigError::at(e.line, format!("unknown grid kind `{}` (radial, mapped, cartesian)", e.value))
            })?;
        }
    }
    let keys = cfg.grid.keys();
    let stray: Vec<_> = r
        .entries
        .iter()
        .filter(|((s, k), _)| s == "grid" && !keys.contains(&k.as_str()))
        .map(|((_, k), e)| (k.clone(), e.line))
        .collect();
    if let Some((k, line)) = stray.into_iter().min_by_key(|x| x.1) {
        return Err(ConfigError::at(line, format!("key `{k}` does not apply to grid kind {}", cfg.grid.kind())));
    }
    match &mut cfg.grid {
        GridSpec::Radial { points, extent } => {
            r.count("grid", "points", points, 4)?;
            r.real("grid", "extent", extent, Check::Positive)?;
        }
        GridSpec::Cartesian { points, extent } => {
            if let Some(e) = r.entries.get(&("grid".to_string(), "points".to_string())) {
                let line = e.line;
                let mut p = *points;
                r.count("grid", "points", &mut p, 4)?;
                if !p.is_power_of_two() {
                    return Err(ConfigError::at(line, format!("`points` must be a power of two for a cartesian grid, got {p}")));
                }
                *points = p;
            }
            r.real("grid", "extent", extent, Check::Positive)?;
        }
        GridSpec::Mapped { panels, order, scale, r_max, tail_correction } => {
            r.count("grid", "panels", panels, 1)?;
            r.count("grid", "order", order, 2)?;
            r.real("grid", "scale", scale, Check::Positive)?;
            let mut rm = f64::NAN;
            r.real("grid", "r_max", &mut rm, Check::Positive)?;
            if !rm.is_nan() {
                *r_max = Some(rm);
            }
            if let Some(v) = r.flag("grid", "tail_correction")? {
                *tail_correction = v;
            }
        }
    }
    Ok(())
}

fn read_time(r: &mut Reader, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    let t = &mut cfg.time;
    r.real("time", "t_final", &mut t.t_final, Check::Positive)?;
    r.real("time", "sample_interval", &mut t.sample_interval, Check::Positive)?;
    let dt_line = r.entries.get(&("time".to_string(), "dt".to_string())).map(|e| e.line);
    let has_cfl = r.entries.contains_key(&("time".to_string(), "cfl".to_string()));
    if let (Some(line), true) = (dt_line, has_cfl) {
        return Err(ConfigError::at(line, "set either `dt` or `cfl`, not both"));
    }
    let mut v = f64::NAN;
    r.real("time", "dt", &mut v, Check::Positive)?;
    if !v.is_nan() {
        t.step = TimeStep::Fixed(v);
    }
    let mut c = f64::NAN;
    r.real("time", "cfl", &mut c, Check::Positive)?;
    if !c.is_nan() {
        t.step = TimeStep::Cfl(c);
    }
    if let Some(d) = r.flag("time", "dealias")? {
        t.dealias = Some(d);
    }
    Ok(())
}

fn read_data(r: &mut Reader, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if let Some(e) = r.take("data", "family") {
        if e.value != cfg.data.family() {
            cfg.data = InitialData::default_for(&e.value).ok_or_else(|| {
                ConfigError::at(e.line, format!("unknown data family `{}` (gaussian, rescaled_q, samples)", e.value))
            })?;
        }
    }
    let keys = cfg.data.keys();
    let stray: Vec<_> = r
        .entries
        .iter()
        .filter(|((s, k), _)| s == "data" && !keys.contains(&k.as_str()))
        .map(|((_, k), e)| (k.clone(), e.line))
        .collect();
    if let Some((k, line)) = stray.into_iter().min_by_key(|x| x.1) {
        return Err(ConfigError::at(line, format!("key `{k}` does not apply to data family {}", cfg.data.family())));
    }
    match &mut cfg.data {
        InitialData::Gaussian { amplitude, width, center, chirp } => {
            r.real("data", "amplitude", amplitude, Check::NonNegative)?;
            r.real("data", "width", width, Check::Positive)?;
            r.real("data", "chirp", chirp, Check::Any)?;
            if let Some((v, line)) = r.list("data", "center")? {
                *center = v
                    .try_into()
                    .map_err(|_| ConfigError::at(line, "`center` needs exactly three coordinates"))?;
            }
        }
        InitialData::RescaledQ { factor, lambda } => {
            r.real("data", "factor", factor, Check::NonNegative)?;
            r.real("data", "lambda", lambda, Check::Positive)?;
        }
        InitialData::Samples { file } => match r.take("data", "file") {
            Some(e) => *file = PathBuf::from(e.value),
            None => return Err(ConfigError::at(0, "data family samples needs a `file` key")),
        },
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for kind in ExperimentKind::ALL {
            let cfg = RunConfig::defaults(kind);
            assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg, "{kind}");
        }
    }

    #[test]
    fn minimal_config() {
        let cfg = parse_config("[run]\nexperiment = farcenter\n").unwrap();
        assert_eq!(cfg, RunConfig::defaults(ExperimentKind::Farcenter));
        assert_eq!(parse_config("").unwrap(), RunConfig::defaults(ExperimentKind::SingleRun));
    }

    #[test]
    fn overrides_are_applied() {
        let text = "# lab\n[run]\nsign = defocusing\nseed = 9\n[grid]\nkind = cartesian\npoints = 32\nextent = 8\n\
                    [time]\ndt = 0.01\n[data]\nfamily = rescaled_q\nfactor = 1.2\n[experiment]\ncenters = 0, 2.5\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.sign, Sign::Defocusing);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.grid, GridSpec::Cartesian { points: 32, extent: 8.0 });
        assert_eq!(cfg.time.step, TimeStep::Fixed(0.01));
        assert_eq!(cfg.data, InitialData::RescaledQ { factor: 1.2, lambda: 1.0 });
        assert_eq!(cfg.params.centers, vec![0.0, 2.5]);
        assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_is_named_with_its_line() {
        let err = parse_config("[run]\nseed = 1\n[time]\nt_finale = 3\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("t_finale"), "{err}");
    }

    #[test]
    fn malformed_input_is_rejected() {
        let cases = [
            ("seed = 1\n", 1),
            ("[nope]\n", 1),
            ("[grid]\npoints\n", 2),
            ("[grid]\npoints = -3\n", 2),
            ("[time]\nt_final = 0\n", 2),
            ("[time]\ndt = 0.1\ncfl = 0.5\n", 2),
            ("[grid]\nkind = cartesian\npoints = 48\n", 3),
            ("[grid]\nkind = radial\norder = 4\n", 3),
            ("[data]\nfamily = gaussian\nfactor = 2\n", 3),
            ("[data]\ncenter = 1, 2\n", 2),
            ("[run]\nseed = 1\nseed = 2\n", 3),
            ("[detect]\ngrowth_factor = 0.5\n", 2),
        ];
        for (text, line) in cases {
            let err = parse_config(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
        }
    }

    #[test]
    fn forced_kind_conflicts() {
        assert!(parse_config_for("[run]\nexperiment = constants\n", Some(ExperimentKind::Dichotomy)).is_err());
        let cfg = parse_config_for("[run]\nseed = 3\n", Some(ExperimentKind::Dichotomy)).unwrap();
        assert_eq!(cfg.experiment, ExperimentKind::Dichotomy);
    }

    #[test]
    fn resolution_scale() {
        let cfg = RunConfig::defaults(ExperimentKind::Dichotomy).with_resolution_scale(2.0).unwrap();
        assert_eq!(cfg.grid, GridSpec::Radial { points: 5999, extent: 60.0 });
        let cfg = RunConfig::defaults(ExperimentKind::Farcenter).with_resolution_scale(0.5).unwrap();
        assert_eq!(cfg.grid, GridSpec::Cartesian { points: 64, extent: 24.0 });
        assert!(RunConfig::defaults(ExperimentKind::Constants).with_resolution_scale(0.0).is_err());
    }
}
