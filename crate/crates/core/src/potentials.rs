//! Bipartite potentials: two compactly supported components and their
//! half-separation `ℓ`.
//!
//! Each half is described in local coordinates on `[0, d]`. The minus half is
//! placed on `[-d, 0]` and the plus half on `[0, d]`; the full potential is
//! `V_+(x - ℓ) + V_-(x + ℓ)`.

use std::fmt;

use crate::{Complex, Error, Result};

/// Which component of the bipartite potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Minus => f.write_str("minus"),
            Side::Plus => f.write_str("plus"),
        }
    }
}

/// One component of the bipartite potential.
#[derive(Debug, Clone, PartialEq)]
pub enum HalfPotential {
    /// `β δ(x)` located at the origin of the local frame.
    Delta { beta: Complex },
    /// Value `values[j]` on `[breaks[j], breaks[j + 1])`, zero outside
    /// `[0, breaks.last()]`. `breaks[0]` must be `0`.
    PiecewiseConstant {
        breaks: Vec<f64>,
        values: Vec<Complex>,
    },
}

impl HalfPotential {
    pub fn delta(beta: Complex) -> Self {
        HalfPotential::Delta { beta }
    }

    /// Constant well `-β²` on `[0, width]`.
    pub fn step(beta: Complex, width: f64) -> Self {
        HalfPotential::PiecewiseConstant {
            breaks: vec![0.0, width],
            values: vec![-beta * beta],
        }
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<Complex>) -> Self {
        HalfPotential::PiecewiseConstant { breaks, values }
    }

    /// Zero potential on `[0, width]`.
    pub fn free(width: f64) -> Self {
        HalfPotential::PiecewiseConstant {
            breaks: vec![0.0, width],
            values: vec![Complex::new(0.0, 0.0)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Err(Error::InvalidPotential(reason));
        match self {
            HalfPotential::Delta { beta } => {
                if !is_finite(*beta) {
                    return invalid(format!("delta strength {beta} is not finite"));
                }
                if *beta == Complex::new(0.0, 0.0) {
                    return invalid("delta strength must be nonzero".into());
                }
            }
            HalfPotential::PiecewiseConstant { breaks, values } => {
                if breaks.len() < 2 {
                    return invalid("at least two breakpoints are required".into());
                }
                if values.len() + 1 != breaks.len() {
                    return invalid(format!(
                        "{} breakpoints need {} values, got {}",
                        breaks.len(),
                        breaks.len() - 1,
                        values.len()
                    ));
                }
                if breaks[0] != 0.0 {
                    return invalid(format!("first breakpoint must be 0, got {}", breaks[0]));
                }
                if breaks.iter().any(|b| !b.is_finite()) {
                    return invalid("breakpoints must be finite".into());
                }
                if breaks.windows(2).any(|w| w[1] <= w[0]) {
                    return invalid("breakpoints must be strictly increasing".into());
                }
                if let Some(v) = values.iter().find(|v| !is_finite(**v)) {
                    return invalid(format!("potential value {v} is not finite"));
                }
            }
        }
        Ok(())
    }

    /// Support width `d` (zero for a delta).
    pub fn width(&self) -> f64 {
        match self {
            HalfPotential::Delta { .. } => 0.0,
            HalfPotential::PiecewiseConstant { breaks, .. } => *breaks.last().unwrap_or(&0.0),
        }
    }

    /// True when the potential is real-valued (real delta strength or all
    /// piece values real).
    pub fn is_real(&self) -> bool {
        match self {
            HalfPotential::Delta { beta } => beta.im == 0.0,
            HalfPotential::PiecewiseConstant { values, .. } => values.iter().all(|v| v.im == 0.0),
        }
    }

    /// Pointwise value at local coordinate `x`, right-continuous at the
    /// breakpoints and zero outside `[0, d]`.
    pub fn eval(&self, x: f64) -> Result<Complex> {
        match self {
            HalfPotential::Delta { .. } => Err(Error::NotPointwiseEvaluable),
            HalfPotential::PiecewiseConstant { breaks, values } => {
                if x < 0.0 || x >= self.width() {
                    return Ok(Complex::new(0.0, 0.0));
                }
                // index of the last breakpoint <= x
                let j = breaks.partition_point(|&b| b <= x) - 1;
                Ok(values[j])
            }
        }
    }
}

fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// The pair `(V_-, V_+)` together with the half-separation `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteProblem {
    minus: HalfPotential,
    plus: HalfPotential,
    ell: f64,
}

impl BipartiteProblem {
    pub fn new(minus: HalfPotential, plus: HalfPotential, ell: f64) -> Result<Self> {
        if !ell.is_finite() || ell <= 0.0 {
            return Err(Error::NonPositiveSeparation(ell));
        }
        for (side, half) in [(Side::Minus, &minus), (Side::Plus, &plus)] {
            if let Err(Error::InvalidPotential(reason)) = half.validate() {
                return Err(Error::InvalidHalf { side, reason });
            }
        }
        Ok(Self { minus, plus, ell })
    }

    pub fn minus(&self) -> &HalfPotential {
        &self.minus
    }

    pub fn plus(&self) -> &HalfPotential {
        &self.plus
    }

    pub fn half(&self, side: Side) -> &HalfPotential {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Same halves at a different separation.
    pub fn with_ell(&self, ell: f64) -> Result<Self> {
        Self::new(self.minus.clone(), self.plus.clone(), ell)
    }

    pub fn is_real(&self) -> bool {
        self.minus.is_real() && self.plus.is_real()
    }
}
