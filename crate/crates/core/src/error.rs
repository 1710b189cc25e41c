use thiserror::Error;

use crate::{Complex, Side};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ell must be positive (got {0})")]
    NonPositiveSeparation(f64),
    #[error("invalid {side} half-potential: {reason}")]
    InvalidHalf { side: Side, reason: String },
    #[error("invalid half-potential: {0}")]
    InvalidPotential(String),
    #[error("a delta interaction has no pointwise value")]
    NotPointwiseEvaluable,
    #[error("denominator of the {0} factor of F vanishes at k = {1}")]
    DenominatorVanishes(Side, Complex),
    #[error("cotangent pole: sin sqrt(k^2 + beta^2) vanishes at k = {0}")]
    CotangentPole(Complex),
    #[error("sin(beta) vanishes for beta = {0}")]
    SinePole(Complex),
    #[error("interaction strength must be nonzero")]
    ZeroStrength,
    #[error("scattering coefficients are undefined at k = 0")]
    ZeroWavenumber,
    #[error("evaluation failed at k = {at}: {reason}")]
    EvaluationFailed { at: Complex, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no radius in (0, {r_hi}] satisfies |F(k) - 1| < 1 - exp(-pi/2) on the circle")]
    NoAdmissibleRadius { r_hi: f64 },
    #[error("index n = {n} is outside the certified range |n| <= {n_max}")]
    OutOfCertifiedRange { n: i64, n_max: i64 },
    #[error("contraction margin {0} is not below 1; enable best-effort mode to iterate anyway")]
    NotContracting(f64),
    #[error("F vanished at k = {0}; its logarithm is undefined")]
    LogArgumentZero(Complex),
    #[error("no convergence after {iterations} iterations (last iterate {last}, last step {last_step:e})")]
    NotConverged {
        last: Complex,
        iterations: usize,
        last_step: f64,
    },
    #[error("residual {residual:e} at k = {k} exceeds the tolerance {tolerance:e}")]
    ResidualTooLarge {
        k: Complex,
        residual: f64,
        tolerance: f64,
    },
    #[error("characteristic function vanishes on the contour near k = {0}")]
    ZeroOnContour(Complex),
    #[error("phase tracking unresolved with {0} nodes")]
    PhaseTrackingUnresolved(usize),
    #[error("winding number estimate {0} is not close to an integer")]
    NonIntegerWinding(f64),
    #[error("derivative of the characteristic equation vanished at k = {0}")]
    DerivativeVanished(Complex),
}
