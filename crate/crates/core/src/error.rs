use thiserror::Error;

/// Every failure the numerical core can report.
///
/// Numeric payloads are widened to `f64` so the enum stays independent of
/// the scalar type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("degenerate spectrum: minimum eigenvalue gap {gap:e} below tolerance {tolerance:e}")]
    DegenerateSpectrum { gap: f64, tolerance: f64 },

    #[error("matrix is not diagonalizable to working precision: {0}")]
    NonDiagonalizable(&'static str),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("arctan pole: argument {re} + {im}i is at +/- i")]
    PoleAtI { re: f64, im: f64 },

    #[error("path sample {index} is zero")]
    ZeroSample { index: usize },

    #[error("path undersampled: argument jump of {jump} rad between samples {index} and {next}", next = index + 1)]
    UndersampledPath { index: usize, jump: f64 },

    #[error("path is empty")]
    EmptyPath,

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("composite Simpson quadrature needs an even step count, got {0}")]
    OddStepCount(usize),

    #[error("vectors are orthogonal (|<beta|alpha>| = {overlap:e}), cannot binormalize")]
    OrthogonalPair { overlap: f64 },

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("basis is not biorthonormal: deviation {deviation:e} exceeds {tolerance:e}")]
    NotBiorthonormal { deviation: f64, tolerance: f64 },

    #[error("density operator has complex eigenvalue with imaginary part {im:e}")]
    ComplexWeights { im: f64 },

    #[error("density operator has negative eigenvalue {0:e}")]
    NegativeWeight(f64),

    #[error("R^dagger L deviates from identity by {defect:e} (tolerance {tolerance:e})")]
    BinormalizationBroken { defect: f64, tolerance: f64 },

    #[error("binormalization defect {defect:e} at sample {sample} exceeds tolerance {tolerance:e}")]
    DefectExceeded { sample: usize, defect: f64, tolerance: f64 },

    #[error("arm multiplier z must be nonzero")]
    ZeroZ,

    #[error("invalid transmission probability {0}: must satisfy 0 < T <= 1")]
    InvalidTransmission(f64),

    #[error("interference vanishes (|trace| = {magnitude:e}); relative phase undefined")]
    VanishingInterference { magnitude: f64 },

    #[error("gauge factor vanishes for eigenpair {pair} at sample {sample}")]
    ZeroGauge { pair: usize, sample: usize },

    #[error("gauge does not start at 1 for eigenpair {pair}")]
    GaugeNotAnchored { pair: usize },

    #[error("nodal point: geometric phase sum magnitude {magnitude:e} at sample {sample}")]
    NodalPoint { sample: usize, magnitude: f64 },

    #[error("evolution is not cyclic: residual {residual:e}")]
    NotCyclic { residual: f64 },

    #[error("invalid gate parameters: {0}")]
    InvalidGateParams(&'static str),

    #[error("Taylor expansion singular: denominator {0:e}")]
    ExpansionSingular(f64),

    #[error("insufficient signal: deviation {deviation:e} at gamma = {gamma:e} is below the noise floor")]
    InsufficientSignal { gamma: f64, deviation: f64 },

    #[error("need at least {needed} sweep points for the slope fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
