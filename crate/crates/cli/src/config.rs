//! JSON scenario configs.
//!
//! A config is `{"mode": ..., "parameters": {...}, "seed": n, "format": "csv",
//! "out": "file"}`; only `mode` is required. Matrices are nested arrays of
//! `[re, im]` pairs, row-major. Any scalar parameter listed as sweepable may
//! be swept with `{"name", "min", "max", "points", "scale"}` entries in
//! `parameters.sweeps`; several sweeps form a cartesian product with the
//! last one varying fastest.

use crate::error::CliError;
use crate::table::Format;
use qdissip::{cplx, Complex64, Matrix, Quantity};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;
use std::f64::consts::PI;
use std::path::PathBuf;

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;
pub type VectorSpec = Vec<[f64; 2]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MziScalar,
    MziInternal,
    Gate,
    Robustness,
    GaugeCheck,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::MziScalar => "mzi-scalar",
            Mode::MziInternal => "mzi-internal",
            Mode::Gate => "gate",
            Mode::Robustness => "robustness",
            Mode::GaugeCheck => "gauge-check",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Mode,
    #[serde(default = "empty_object")]
    parameters: Value,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

/// One validated sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagatorKind {
    #[default]
    Rk4,
    Exact,
}

/// Parameters that can be overwritten by a sweep axis.
pub trait Sweepable: Clone {
    const SWEEPABLE: &'static [&'static str];

    /// Returns false for names outside [`Self::SWEEPABLE`].
    fn set(&mut self, name: &str, value: f64) -> bool;
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MziScalar {
    #[serde(default = "one")]
    pub transmission: f64,
    #[serde(default)]
    pub chi: f64,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
}

impl Sweepable for MziScalar {
    const SWEEPABLE: &'static [&'static str] = &["transmission", "chi"];

    fn set(&mut self, name: &str, value: f64) -> bool {
        match name {
            "transmission" => self.transmission = value,
            "chi" => self.chi = value,
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    /// Defaults to the per-period rule of the propagator module.
    pub steps: Option<usize>,
}

/// `H(t) = H0 + sin(frequency t + phase) matrix`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub matrix: MatrixSpec,
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Either a full matrix, decomposed into its eigenbasis, or explicit
/// weights with right vectors `alphas` and left vectors `betas`
/// (defaulting to `alphas`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub matrix: Option<MatrixSpec>,
    pub weights: Option<Vec<f64>>,
    pub alphas: Option<Vec<VectorSpec>>,
    pub betas: Option<Vec<VectorSpec>>,
    /// Rescale each beta so that `<beta|alpha> = 1` before assembly.
    #[serde(default)]
    pub binormalize: bool,
    #[serde(default = "decompose_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MziInternal {
    pub hamiltonian: MatrixSpec,
    pub drive: Option<DriveSpec>,
    pub state: StateSpec,
    #[serde(default = "one")]
    pub transmission: f64,
    #[serde(default)]
    pub chi: f64,
    pub grid: GridSpec,
    #[serde(default)]
    pub propagator: PropagatorKind,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
}

impl Sweepable for MziInternal {
    const SWEEPABLE: &'static [&'static str] = &["transmission", "chi", "t1"];

    fn set(&mut self, name: &str, value: f64) -> bool {
        match name {
            "transmission" => self.transmission = value,
            "chi" => self.chi = value,
            "t1" => self.grid.t1 = value,
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateMode {
    pub eta: f64,
    #[serde(default)]
    pub gamma: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub r: f64,
    pub tau: Option<f64>,
    /// `tau` in units of the lossless period `2 pi / eta`.
    pub tau_periods: Option<f64>,
    /// Add columns from the numerical pipelines.
    #[serde(default)]
    pub pipeline: bool,
    #[serde(default = "pipeline_steps")]
    pub pipeline_steps: usize,
    /// Add the small-gamma expansions.
    #[serde(default)]
    pub expansions: bool,
    /// Add both pure cyclic phase forms for the state `|a+>`.
    #[serde(default)]
    pub cyclic: bool,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
}

impl Sweepable for GateMode {
    const SWEEPABLE: &'static [&'static str] = &["eta", "gamma", "theta", "r", "tau", "tau_periods"];

    fn set(&mut self, name: &str, value: f64) -> bool {
        match name {
            "eta" => self.eta = value,
            "gamma" => self.gamma = value,
            "theta" => self.theta = value,
            "r" => self.r = value,
            "tau" => {
                self.tau = Some(value);
                self.tau_periods = None;
            }
            "tau_periods" => {
                self.tau_periods = Some(value);
                self.tau = None;
            }
            _ => return false,
        }
        true
    }
}

impl GateMode {
    pub fn tau(&self) -> f64 {
        resolve_tau(self.tau, self.tau_periods, self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityName {
    Omega,
    Gamma,
    ImPhi,
    Phi,
    Visibility,
}

impl From<QuantityName> for Quantity {
    fn from(q: QuantityName) -> Self {
        match q {
            QuantityName::Omega => Quantity::Omega,
            QuantityName::Gamma => Quantity::Gamma,
            QuantityName::ImPhi => Quantity::ImPhi,
            QuantityName::Phi => Quantity::Phi,
            QuantityName::Visibility => Quantity::Visibility,
        }
    }
}

/// Deviation of gate quantities from their lossless values over a single
/// `gamma` sweep, with log-log slopes.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Robustness {
    pub eta: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub r: f64,
    pub tau: Option<f64>,
    pub tau_periods: Option<f64>,
    #[serde(default = "default_quantities")]
    pub quantities: Vec<QuantityName>,
    pub sweeps: Vec<SweepSpec>,
}

impl Sweepable for Robustness {
    const SWEEPABLE: &'static [&'static str] = &["gamma"];

    fn set(&mut self, name: &str, _value: f64) -> bool {
        name == "gamma"
    }
}

impl Robustness {
    pub fn tau(&self) -> f64 {
        resolve_tau(self.tau, self.tau_periods, self.eta)
    }
}

/// Geometric phase of the gate under seeded random gauges
/// `z_k(t) = exp(a_k sin(wa t) + i b_k sin(wb t))`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeCheck {
    pub eta: f64,
    #[serde(default)]
    pub gamma: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub r: f64,
    pub tau: Option<f64>,
    pub tau_periods: Option<f64>,
    #[serde(default = "gauge_steps")]
    pub steps: usize,
    #[serde(default = "gauge_count")]
    pub gauges: usize,
    #[serde(default = "max_log_amplitude")]
    pub max_log_amplitude: f64,
    #[serde(default = "max_phase_amplitude")]
    pub max_phase_amplitude: f64,
    #[serde(default = "min_frequency")]
    pub min_frequency: f64,
    #[serde(default = "max_frequency")]
    pub max_frequency: f64,
    #[serde(default = "exact")]
    pub propagator: PropagatorKind,
}

impl GaugeCheck {
    pub fn tau(&self) -> f64 {
        resolve_tau(self.tau, self.tau_periods, self.eta)
    }
}

#[derive(Debug, Clone)]
pub enum Scenario {
    MziScalar(MziScalar),
    MziInternal(MziInternal),
    Gate(GateMode),
    Robustness(Robustness),
    GaugeCheck(GaugeCheck),
}

impl Scenario {
    pub fn mode(&self) -> Mode {
        match self {
            Scenario::MziScalar(_) => Mode::MziScalar,
            Scenario::MziInternal(_) => Mode::MziInternal,
            Scenario::Gate(_) => Mode::Gate,
            Scenario::Robustness(_) => Mode::Robustness,
            Scenario::GaugeCheck(_) => Mode::GaugeCheck,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}
fn decompose_tolerance() -> f64 {
    1e-10
}
fn pipeline_steps() -> usize {
    10_000
}
fn gauge_steps() -> usize {
    2000
}
fn gauge_count() -> usize {
    100
}
fn max_log_amplitude() -> f64 {
    1.6
}
fn max_phase_amplitude() -> f64 {
    PI
}
fn min_frequency() -> f64 {
    0.2
}
fn max_frequency() -> f64 {
    2.0
}
fn exact() -> PropagatorKind {
    PropagatorKind::Exact
}
fn default_quantities() -> Vec<QuantityName> {
    vec![QuantityName::Omega, QuantityName::Gamma, QuantityName::ImPhi]
}

fn resolve_tau(tau: Option<f64>, periods: Option<f64>, eta: f64) -> f64 {
    match (tau, periods) {
        (Some(t), _) => t,
        (None, Some(k)) => k * 2.0 * PI / eta.abs(),
        (None, None) => f64::NAN,
    }
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| path_error("", e))?;
    let scenario = match raw.mode {
        Mode::MziScalar => {
            let p: MziScalar = parameters(raw.parameters)?;
            check_axes::<MziScalar>(&p.sweeps)?;
            Scenario::MziScalar(p)
        }
        Mode::MziInternal => {
            let p: MziInternal = parameters(raw.parameters)?;
            check_internal(&p)?;
            check_axes::<MziInternal>(&p.sweeps)?;
            Scenario::MziInternal(p)
        }
        Mode::Gate => {
            let p: GateMode = parameters(raw.parameters)?;
            check_tau(p.tau, p.tau_periods, p.eta)?;
            check_steps("parameters.pipeline_steps", Some(p.pipeline_steps))?;
            check_axes::<GateMode>(&p.sweeps)?;
            Scenario::Gate(p)
        }
        Mode::Robustness => {
            let p: Robustness = parameters(raw.parameters)?;
            check_tau(p.tau, p.tau_periods, p.eta)?;
            if p.sweeps.len() != 1 {
                return Err(CliError::config("parameters.sweeps", "robustness needs exactly one sweep, over gamma"));
            }
            check_axes::<Robustness>(&p.sweeps)?;
            if p.quantities.is_empty() {
                return Err(CliError::config("parameters.quantities", "at least one quantity is required"));
            }
            Scenario::Robustness(p)
        }
        Mode::GaugeCheck => {
            let p: GaugeCheck = parameters(raw.parameters)?;
            check_tau(p.tau, p.tau_periods, p.eta)?;
            check_steps("parameters.steps", Some(p.steps))?;
            if p.gauges == 0 {
                return Err(CliError::config("parameters.gauges", "need at least one gauge"));
            }
            if !(p.min_frequency > 0.0 && p.min_frequency <= p.max_frequency && p.max_frequency.is_finite()) {
                return Err(CliError::config("parameters.min_frequency", "need 0 < min_frequency <= max_frequency"));
            }
            if !(p.max_log_amplitude.is_finite() && p.max_phase_amplitude.is_finite()) {
                return Err(CliError::config("parameters.max_log_amplitude", "gauge amplitudes must be finite"));
            }
            Scenario::GaugeCheck(p)
        }
    };
    Ok(ScenarioConfig {
        scenario,
        seed: raw.seed.unwrap_or(0),
        format: raw.format.unwrap_or(Format::Csv),
        out: raw.out,
    })
}

fn parameters<P: DeserializeOwned>(value: Value) -> Result<P, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| path_error("parameters", e))
}

fn path_error(prefix: &str, e: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let inner = e.path().to_string();
    let path = match (prefix.is_empty(), inner == ".") {
        (true, _) => inner,
        (false, true) => prefix.to_owned(),
        (false, false) => format!("{prefix}.{inner}"),
    };
    CliError::config(path, e.into_inner().to_string())
}

fn check_tau(tau: Option<f64>, periods: Option<f64>, eta: f64) -> Result<(), CliError> {
    match (tau, periods) {
        (Some(_), Some(_)) => Err(CliError::config("parameters.tau", "give either tau or tau_periods, not both")),
        (None, None) => Err(CliError::config("parameters.tau", "missing tau (or tau_periods)")),
        (None, Some(_)) if eta == 0.0 => Err(CliError::config("parameters.tau_periods", "tau_periods needs eta != 0")),
        _ => Ok(()),
    }
}

fn check_steps(path: &str, steps: Option<usize>) -> Result<(), CliError> {
    match steps {
        Some(n) if n < 2 || n % 2 == 1 => {
            Err(CliError::config(path, format!("step count must be even and >= 2, got {n}")))
        }
        _ => Ok(()),
    }
}

/// Validates sweep entries against the mode's sweepable names.
pub fn check_axes<P: Sweepable>(sweeps: &[SweepSpec]) -> Result<Vec<Axis>, CliError> {
    let mut axes: Vec<Axis> = Vec::with_capacity(sweeps.len());
    for (i, s) in sweeps.iter().enumerate() {
        let at = |field: &str| format!("parameters.sweeps[{i}].{field}");
        if !P::SWEEPABLE.contains(&s.name.as_str()) {
            return Err(CliError::config(
                at("name"),
                format!("`{}` cannot be swept here; expected one of {}", s.name, P::SWEEPABLE.join(", ")),
            ));
        }
        if axes.iter().any(|a| a.name == s.name) {
            return Err(CliError::config(at("name"), format!("`{}` is swept twice", s.name)));
        }
        if s.points == 0 {
            return Err(CliError::config(at("points"), "need at least one point"));
        }
        if !s.min.is_finite() {
            return Err(CliError::config(at("min"), "must be finite"));
        }
        if !s.max.is_finite() {
            return Err(CliError::config(at("max"), "must be finite"));
        }
        let values = match s.scale {
            Scale::Linear => linear(s.min, s.max, s.points),
            Scale::Log => {
                if s.min <= 0.0 {
                    return Err(CliError::config(at("min"), "log sweeps need min > 0"));
                }
                if s.max <= 0.0 {
                    return Err(CliError::config(at("max"), "log sweeps need max > 0"));
                }
                qdissip::gate::log_spaced(s.min, s.max, s.points)
            }
        };
        axes.push(Axis { name: s.name.clone(), values });
    }
    Ok(axes)
}

fn linear(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    (0..points)
        .map(|j| if j + 1 == points { max } else { min + (max - min) * j as f64 / (points - 1) as f64 })
        .collect()
}

fn check_internal(p: &MziInternal) -> Result<(), CliError> {
    let n = matrix(&p.hamiltonian, "parameters.hamiltonian")?.dim();
    if let Some(d) = &p.drive {
        let m = matrix(&d.matrix, "parameters.drive.matrix")?;
        if m.dim() != n {
            return Err(dim_error("parameters.drive.matrix", n, m.dim()));
        }
        if p.propagator == PropagatorKind::Exact {
            return Err(CliError::config("parameters.propagator", "exact propagators need a constant Hamiltonian"));
        }
    }
    check_steps("parameters.grid.steps", p.grid.steps)?;
    let s = &p.state;
    match (&s.matrix, &s.weights, &s.alphas) {
        (Some(m), None, None) => {
            if s.betas.is_some() {
                return Err(CliError::config("parameters.state.betas", "betas only go with weights and alphas"));
            }
            let m = matrix(m, "parameters.state.matrix")?;
            if m.dim() != n {
                return Err(dim_error("parameters.state.matrix", n, m.dim()));
            }
        }
        (None, Some(w), Some(a)) => {
            if w.len() != n {
                return Err(dim_error("parameters.state.weights", n, w.len()));
            }
            check_vectors(a, n, "parameters.state.alphas")?;
            if let Some(b) = &s.betas {
                check_vectors(b, n, "parameters.state.betas")?;
            }
        }
        _ => {
            return Err(CliError::config(
                "parameters.state",
                "give either `matrix` or both `weights` and `alphas` (optionally `betas`)",
            ))
        }
    }
    Ok(())
}

fn check_vectors(vs: &[VectorSpec], n: usize, path: &str) -> Result<(), CliError> {
    if vs.len() != n {
        return Err(dim_error(path, n, vs.len()));
    }
    for (i, v) in vs.iter().enumerate() {
        if v.len() != n {
            return Err(dim_error(&format!("{path}[{i}]"), n, v.len()));
        }
    }
    Ok(())
}

fn dim_error(path: &str, expected: usize, found: usize) -> CliError {
    CliError::config(path, format!("dimension mismatch: expected {expected}, found {found}"))
}

pub fn complex(c: [f64; 2]) -> Complex64 {
    cplx(c[0], c[1])
}

pub fn vector(v: &VectorSpec) -> Vec<Complex64> {
    v.iter().map(|&c| complex(c)).collect()
}

/// Square, non-empty, finite matrix from its nested-array form.
pub fn matrix(spec: &MatrixSpec, path: &str) -> Result<Matrix, CliError> {
    if spec.is_empty() {
        return Err(CliError::config(path, "matrix must have at least one row"));
    }
    let n = spec.len();
    let mut rows = Vec::with_capacity(n);
    for (i, row) in spec.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::config(
                format!("{path}[{i}]"),
                format!("matrix is not square: row has {} entries, expected {n}", row.len()),
            ));
        }
        if row.iter().any(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(CliError::config(format!("{path}[{i}]"), "non-finite entry"));
        }
        rows.push(vector(row));
    }
    Matrix::from_rows(&rows).map_err(|e| CliError::config(path, e.to_string()))
}
