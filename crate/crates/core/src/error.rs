//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vortex charge must be a non-zero integer")]
    ZeroCharge,

    #[error("position must be finite, got ({re}, {im})")]
    NonFinitePosition { re: f64, im: f64 },

    #[error(
        "vortices {first} and {second} coincide: separation {separation:e} < epsilon {epsilon:e}"
    )]
    CoincidentVortices {
        first: usize,
        second: usize,
        separation: f64,
        epsilon: f64,
    },

    #[error("coincident evaluation points: separation {separation:e} < epsilon {epsilon:e}")]
    CoincidentPoints { separation: f64, epsilon: f64 },

    #[error("no pair interaction exists on the sphere: genus 0 admits no vortex configurations")]
    SphereGeometry,

    #[error("operation requires {required} geometry")]
    GeometryMismatch { required: &'static str },

    #[error("torus periods must be positive, got L1={l1}, L2={l2}")]
    InvalidPeriods { l1: f64, l2: f64 },

    #[error(
        "torus aspect ratio L2/L1 = {ratio} outside [{min}, {max}]; \
         use Torus::unrestricted to override"
    )]
    AspectRatio { ratio: f64, min: f64, max: f64 },

    #[error("rotation factor must be unimodular: |eta| = {modulus}")]
    NonUnimodularRotation { modulus: f64 },

    #[error("genus must be non-negative, got {genus}")]
    NegativeGenus { genus: i64 },

    #[error(
        "step size underflow at t = {time} (h = {step:e}): \
         a pair is collapsing with annihilation disabled"
    )]
    StepSizeUnderflow { time: f64, step: f64 },

    #[error("step limit exceeded after {steps} steps")]
    StepLimitExceeded { steps: u64 },

    #[error("inadmissible geometry: {reason}")]
    Inadmissible { reason: String },

    #[error("evaluation at a divisor point (distance {distance:e})")]
    EvaluationAtDivisorPoint { distance: f64 },

    #[error("divisor order must be a non-zero integer")]
    ZeroOrder,

    #[error("contour passes within {distance:e} of a divisor point (tolerance {tolerance:e})")]
    ContourThroughSingularity { distance: f64, tolerance: f64 },

    #[error("circulation quadrature did not settle: residual {residual:e} >= {tolerance:e}")]
    QuadratureFailure { residual: f64, tolerance: f64 },

    #[error("contour quadrature needs at least {min} nodes, got {got}")]
    TooFewNodes { got: usize, min: usize },

    #[error("field grid needs at least 2x2 samples, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },

    #[error("degenerate field window: {detail}")]
    DegenerateWindow { detail: String },

    #[error("model fails its sign conditions at T = {temperature}: {detail}")]
    ModelValidation { temperature: f64, detail: String },

    #[error("degenerate free energy: quartic and sextic coefficients both vanish")]
    DegenerateModel,

    #[error("free energy is unbounded below at T = {temperature}")]
    UnboundedFreeEnergy { temperature: f64 },

    #[error("temperature grid must be non-empty and strictly ascending")]
    BadTemperatureGrid,

    #[error("beta grid must be non-empty and strictly ascending")]
    BadBetaGrid,

    #[error("failure at T = {temperature}: {source}")]
    AtTemperature {
        temperature: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("failure at beta = {beta}: {source}")]
    AtBeta {
        beta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid ensemble spec: {detail}")]
    InvalidSpec { detail: String },

    #[error("pairing statistics undefined: {detail}")]
    PairingUndefined { detail: String },
}
