//! Boundary data of the Jost solutions `X_±`.
//!
//! `X_±` solves `-X'' + V_± X = k² X` and equals `e^{-ikx}` to the left of the
//! support. Only `(X, X')` at the right edge of each support is needed, which
//! for piecewise-constant and delta potentials follows from exact transfer
//! matrices.

use crate::{BipartiteProblem, Complex, HalfPotential, Result, Side, I};

/// Below this value of `|μ| h²` the propagator uses its Taylor expansion.
const SERIES_SWITCH: f64 = 1e-6;

/// Default threshold on `|X'(·, 0)|` for the admissibility check.
pub const DEFAULT_ADMISSIBILITY_THRESHOLD: f64 = 1e-12;

/// A pair `(X, X')` at some point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveState {
    pub value: Complex,
    pub derivative: Complex,
}

impl WaveState {
    pub fn new(value: Complex, derivative: Complex) -> Self {
        Self { value, derivative }
    }

    /// Plane wave `e^{-ikx}` and its derivative at `x`.
    pub fn incoming(k: Complex, x: f64) -> Self {
        let e = (-I * k * x).exp();
        Self::new(e, -I * k * e)
    }
}

/// `(X, X')` at the right edge of a half-potential's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub value: Complex,
    /// Right limit when a delta sits at the evaluation point.
    pub derivative: Complex,
    pub k: Complex,
    /// Evaluation abscissa in the local frame of the half (its width `d`).
    pub point: f64,
}

/// `cos(√μ h)` and `sin(√μ h)/√μ`, both entire in `μ`.
///
/// Both are even in `√μ`, so the choice of square root branch cancels.
pub fn cos_sinc(mu: Complex, h: f64) -> (Complex, Complex) {
    let t = mu * (h * h);
    if t.norm() < SERIES_SWITCH {
        let c = 1.0 - t / 2.0 + t * t / 24.0 - t * t * t / 720.0;
        let s = h * (1.0 - t / 6.0 + t * t / 120.0 - t * t * t / 5040.0);
        (c, s)
    } else {
        let root = mu.sqrt();
        let arg = root * h;
        (arg.cos(), arg.sin() / root)
    }
}

/// Exact propagation of `(X, X')` across a piece of length `h` on which
/// `X'' = (v - k²) X`.
pub fn propagate_constant(v: Complex, h: f64, state: WaveState, k: Complex) -> WaveState {
    let mu = k * k - v;
    let (c, s) = cos_sinc(mu, h);
    WaveState {
        value: c * state.value + s * state.derivative,
        derivative: -mu * s * state.value + c * state.derivative,
    }
}

/// Jump condition `X'(0+) - X'(0-) = β X(0)` of a delta interaction.
pub fn apply_delta_jump(beta: Complex, state: WaveState) -> WaveState {
    WaveState {
        value: state.value,
        derivative: state.derivative + beta * state.value,
    }
}

/// Boundary data of `X_-` at `x = 0` (minus side) or of `X_+` at `x = d_+`
/// (plus side).
pub fn jost_boundary(half: &HalfPotential, side: Side, k: Complex) -> Result<BoundaryData> {
    half.validate()?;
    let d = half.width();
    let state = match half {
        HalfPotential::Delta { beta } => apply_delta_jump(*beta, WaveState::incoming(k, 0.0)),
        HalfPotential::PiecewiseConstant { breaks, values } => {
            let x_left = match side {
                Side::Minus => -d,
                Side::Plus => 0.0,
            };
            breaks
                .windows(2)
                .zip(values)
                .fold(WaveState::incoming(k, x_left), |state, (w, &v)| {
                    propagate_constant(v, w[1] - w[0], state, k)
                })
        }
    };
    Ok(BoundaryData {
        value: state.value,
        derivative: state.derivative,
        k,
        point: d,
    })
}

/// Per-half outcome of the admissibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfAdmissibility {
    pub side: Side,
    /// `X'` at the right support edge for `k = 0`.
    pub derivative_at_zero: Complex,
    pub nonzero: bool,
    /// `sin(β d)` for a single constant piece `-β²` of width `d`.
    pub step_sine: Option<Complex>,
}

impl HalfAdmissibility {
    pub fn passed(&self) -> bool {
        self.nonzero
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub minus: HalfAdmissibility,
    pub plus: HalfAdmissibility,
    pub threshold: f64,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.minus.passed() && self.plus.passed()
    }

    /// Human-readable description of each failed condition.
    pub fn failures(&self) -> Vec<String> {
        [&self.minus, &self.plus]
            .into_iter()
            .filter(|h| !h.passed())
            .map(|h| {
                let name = match h.side {
                    Side::Minus => "X_-'(0, 0)",
                    Side::Plus => "X_+'(d_+, 0)",
                };
                let mut msg = format!(
                    "{name} = {} is below the threshold {:e}",
                    h.derivative_at_zero, self.threshold
                );
                if let Some(s) = h.step_sine {
                    msg.push_str(&format!(" (sin(beta d) = {s})"));
                }
                msg
            })
            .collect()
    }
}

/// Checks `X_-'(0,0) ≠ 0` and `X_+'(d_+,0) ≠ 0`.
pub fn check_admissibility(problem: &BipartiteProblem, threshold: f64) -> AdmissibilityReport {
    let half_report = |side: Side| {
        let half = problem.half(side);
        let zero = Complex::new(0.0, 0.0);
        // the problem was validated on construction
        let data = jost_boundary(half, side, zero).expect("validated half");
        let step_sine = match half {
            HalfPotential::PiecewiseConstant { breaks, values } if values.len() == 1 => {
                let beta = (-values[0]).sqrt();
                Some((beta * breaks[1]).sin())
            }
            _ => None,
        };
        HalfAdmissibility {
            side,
            derivative_at_zero: data.derivative,
            nonzero: data.derivative.norm() > threshold,
            step_sine,
        }
    };
    AdmissibilityReport {
        minus: half_report(Side::Minus),
        plus: half_report(Side::Plus),
        threshold,
    }
}
