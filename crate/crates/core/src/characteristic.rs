//! The characteristic function `F(k)`, its closed forms, the scattering
//! coefficients of each half, Cauchy-quadrature derivatives, and the
//! certified disk `|k| ≤ r` on which `|F - 1| < 1 - e^{-π/2}`.
//!
//! The wavenumbers of the bipartite problem are exactly the roots of
//! `e^{4ikℓ} = F(k)` with
//!
//! ```text
//!        X_-'(0,k) - ik X_-(0,k)     X_+'(d,k) - ik X_+(d,k)
//! F(k) = ----------------------- · -------------------------
//!        X_-'(0,k) + ik X_-(0,k)    X_+'(d,-k) - ik X_+(d,-k)
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use crate::jost::jost_boundary;
use crate::{BipartiteProblem, Complex, Error, HalfPotential, Result, Side, I};

/// Relative size below which a denominator of `F` counts as zero.
const DENOMINATOR_RTOL: f64 = 1e-13;

/// Threshold below which `sin` counts as zero in the closed forms.
const POLE_TOL: f64 = 1e-12;

/// `1 - e^{-π/2} ≈ 0.792`: on the disk where `|F - 1|` stays below this,
/// `|ln F| ≤ π/2` and the fixed-point map sends the disk into itself.
pub fn log_safe_threshold() -> f64 {
    1.0 - (-FRAC_PI_2).exp()
}

/// Evaluates `F(k)` from the Jost boundary data of both halves.
pub fn eval_f(problem: &BipartiteProblem, k: Complex) -> Result<Complex> {
    let minus = jost_boundary(problem.minus(), Side::Minus, k)?;
    let plus = jost_boundary(problem.plus(), Side::Plus, k)?;
    let plus_reflected = jost_boundary(problem.plus(), Side::Plus, -k)?;

    let ik = I * k;
    let minus_num = minus.derivative - ik * minus.value;
    let minus_den = minus.derivative + ik * minus.value;
    let plus_num = plus.derivative - ik * plus.value;
    let plus_den = plus_reflected.derivative - ik * plus_reflected.value;

    let vanishes = |den: Complex, a: Complex, b: Complex| {
        den.norm() <= DENOMINATOR_RTOL * (a.norm() + b.norm())
    };
    if vanishes(minus_den, minus.derivative, ik * minus.value) {
        return Err(Error::DenominatorVanishes(Side::Minus, k));
    }
    if vanishes(
        plus_den,
        plus_reflected.derivative,
        ik * plus_reflected.value,
    ) {
        return Err(Error::DenominatorVanishes(Side::Plus, k));
    }
    let f = (minus_num / minus_den) * (plus_num / plus_den);
    if !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::EvaluationFailed {
            at: k,
            reason: "F is not finite".into(),
        });
    }
    Ok(f)
}

/// Principal logarithm of `F(k)`.
pub fn ln_f(problem: &BipartiteProblem, k: Complex) -> Result<Complex> {
    let f = eval_f(problem, k)?;
    if f == Complex::new(0.0, 0.0) {
        return Err(Error::LogArgumentZero(k));
    }
    Ok(f.ln())
}

/// `F(k)` for the unit-width wells `V_± = -β_±²`:
/// `F = F_- F_+ / (β_-² β_+²)` with `F_± = 2ik κ cot κ + β_±² + 2k²`,
/// `κ² = k² + β_±²`.
pub fn eval_f_step_closed_form(
    beta_minus: Complex,
    beta_plus: Complex,
    k: Complex,
) -> Result<Complex> {
    let factor = |beta: Complex| -> Result<Complex> {
        if beta == Complex::new(0.0, 0.0) {
            return Err(Error::ZeroStrength);
        }
        let mu = k * k + beta * beta;
        // κ cot κ = cos κ / (sin κ / κ), even in κ hence a function of μ
        let (cos, sinc) = crate::jost::cos_sinc(mu, 1.0);
        if sinc.norm() < POLE_TOL {
            return Err(Error::CotangentPole(k));
        }
        Ok(2.0 * I * k * (cos / sinc) + beta * beta + 2.0 * k * k)
    };
    let b2 = beta_minus * beta_minus * beta_plus * beta_plus;
    Ok(factor(beta_minus)? * factor(beta_plus)? / b2)
}

/// `F(k) = (2ik - β_+)(2ik - β_-) / (β_- β_+)` for a pair of delta
/// interactions.
pub fn eval_f_delta_closed_form(
    beta_minus: Complex,
    beta_plus: Complex,
    k: Complex,
) -> Result<Complex> {
    let zero = Complex::new(0.0, 0.0);
    if beta_minus == zero || beta_plus == zero {
        return Err(Error::ZeroStrength);
    }
    let two_ik = 2.0 * I * k;
    Ok((two_ik - beta_plus) * (two_ik - beta_minus) / (beta_minus * beta_plus))
}

/// Coefficients of `X = a e^{-ikx} + b e^{ikx}` to the right of a half's
/// support (global frame: the minus half ends at 0, the plus half at `d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCoeffs {
    pub a: Complex,
    pub b: Complex,
    pub k: Complex,
    pub side: Side,
}

pub fn scattering_coefficients(
    half: &HalfPotential,
    side: Side,
    k: Complex,
) -> Result<ScatteringCoeffs> {
    if k == Complex::new(0.0, 0.0) {
        return Err(Error::ZeroWavenumber);
    }
    let data = jost_boundary(half, side, k)?;
    let ik = I * k;
    let two_ik = 2.0 * ik;
    let (a, b) = match side {
        Side::Minus => (
            (ik * data.value - data.derivative) / two_ik,
            (ik * data.value + data.derivative) / two_ik,
        ),
        Side::Plus => {
            let d = half.width();
            (
                (ik * data.value - data.derivative) / (two_ik * (-ik * d).exp()),
                (ik * data.value + data.derivative) / (two_ik * (ik * d).exp()),
            )
        }
    };
    Ok(ScatteringCoeffs { a, b, k, side })
}

/// Values of `f` at `nodes` equispaced points on the circle
/// `|z - center| = ring_radius`, starting at angle 0.
pub fn ring_samples<F>(f: F, center: Complex, ring_radius: f64, nodes: usize) -> Result<Vec<Complex>>
where
    F: Fn(Complex) -> Result<Complex>,
{
    (0..nodes)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / nodes as f64;
            let z = center + Complex::from_polar(ring_radius, theta);
            f(z).map_err(|e| match e {
                e @ Error::EvaluationFailed { .. } => e,
                other => Error::EvaluationFailed {
                    at: z,
                    reason: other.to_string(),
                },
            })
        })
        .collect()
}

/// `order`-th derivative at the ring center from samples produced by
/// [`ring_samples`] (trapezoid rule on the Cauchy integral).
pub fn derivative_from_samples(samples: &[Complex], ring_radius: f64, order: usize) -> Complex {
    let n = samples.len();
    let m = order as f64;
    let sum: Complex = samples
        .iter()
        .enumerate()
        .map(|(j, &s)| s * Complex::from_polar(1.0, -2.0 * PI * m * j as f64 / n as f64))
        .sum();
    let factorial: f64 = (1..=order).map(|i| i as f64).product();
    sum * factorial / (n as f64 * ring_radius.powi(order as i32))
}

/// `d^order f / dk^order` at `center` by the trapezoid rule on
/// `order!/(2πi) ∮ f(z) (z - center)^{-order-1} dz`.
pub fn cauchy_derivative<F>(
    f: F,
    center: Complex,
    order: usize,
    ring_radius: f64,
    nodes: usize,
) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    check_quadrature(ring_radius, nodes)?;
    let samples = ring_samples(f, center, ring_radius, nodes)?;
    Ok(derivative_from_samples(&samples, ring_radius, order))
}

pub(crate) fn check_quadrature(ring_radius: f64, nodes: usize) -> Result<()> {
    if nodes < 16 {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs at least 16 nodes, got {nodes}"
        )));
    }
    if !(ring_radius > 0.0 && ring_radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ring radius must be positive, got {ring_radius}"
        )));
    }
    Ok(())
}

/// `F'(k)` by Cauchy quadrature.
pub fn f_prime(
    problem: &BipartiteProblem,
    k: Complex,
    ring_radius: f64,
    nodes: usize,
) -> Result<Complex> {
    cauchy_derivative(|z| eval_f(problem, z), k, 1, ring_radius, nodes)
}

/// Ring radius for a derivative at `center` inside the disk of radius `r`:
/// `0.8 (r - |center|)`, floored at `r / 20` for centers on or beyond the
/// boundary.
pub fn inner_ring_radius(r: f64, center: Complex) -> f64 {
    (0.8 * (r - center.norm())).max(0.05 * r)
}

/// Ring radius used for derivatives sampled on the boundary circle itself.
pub(crate) fn boundary_ring_radius(r: f64) -> f64 {
    0.1 * r
}

/// Knobs for the radius search and the derivative bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryOptions {
    /// Upper end of the radius search.
    pub r_hi: f64,
    /// Points on the circle `|k| = r`.
    pub boundary_samples: usize,
    /// The radius predicate uses `(1 - e^{-π/2})(1 - safety)`.
    pub safety: f64,
    /// Multiplier applied to the sampled maximum of `|F'|`.
    pub sup_inflation: f64,
    /// Cauchy quadrature nodes.
    pub quadrature_nodes: usize,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        Self {
            r_hi: 1.0,
            boundary_samples: 720,
            safety: 0.02,
            sup_inflation: 1.05,
            quadrature_nodes: 256,
        }
    }
}

/// Points `r e^{2πij/n}` on the boundary circle.
pub fn circle_points(radius: f64, n: usize) -> impl Iterator<Item = Complex> {
    (0..n).map(move |j| Complex::from_polar(radius, 2.0 * PI * j as f64 / n as f64))
}

/// `max |F(k) - 1|` over `samples` points on `|k| = r`, or `None` if `F`
/// cannot be evaluated somewhere on the circle.
pub fn boundary_deviation(problem: &BipartiteProblem, r: f64, samples: usize) -> Option<f64> {
    circle_points(r, samples).try_fold(0.0f64, |acc, k| {
        eval_f(problem, k).ok().map(|f| acc.max((f - 1.0).norm()))
    })
}

/// Largest `r ≤ r_hi` (to bisection accuracy) with
/// `max_{|k|=r} |F(k) - 1| < (1 - e^{-π/2})(1 - safety)`.
pub fn estimate_radius(problem: &BipartiteProblem, r_hi: f64, boundary_samples: usize) -> Result<f64> {
    estimate_radius_with(
        problem,
        &GeometryOptions {
            r_hi,
            boundary_samples,
            ..Default::default()
        },
    )
}

pub fn estimate_radius_with(problem: &BipartiteProblem, opts: &GeometryOptions) -> Result<f64> {
    if opts.r_hi.is_nan() || opts.r_hi <= 0.0 || opts.boundary_samples == 0 {
        return Err(Error::InvalidParameter(
            "r_hi and boundary_samples must be positive".into(),
        ));
    }
    let threshold = log_safe_threshold() * (1.0 - opts.safety);
    let passes = |r: f64| {
        boundary_deviation(problem, r, opts.boundary_samples).is_some_and(|dev| dev < threshold)
    };
    if passes(opts.r_hi) {
        return Ok(opts.r_hi);
    }
    // max |F - 1| on |k| = r is nondecreasing in r (maximum modulus)
    let (mut lo, mut hi) = (0.0, opts.r_hi);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= opts.r_hi * 1e-12 {
        return Err(Error::NoAdmissibleRadius { r_hi: opts.r_hi });
    }
    Ok(lo)
}

/// The certified disk `|k| ≤ r` and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskGeometry {
    pub radius: f64,
    /// Estimate of `max |F'|` over the closed disk.
    pub sup_f_prime: f64,
    /// `e^{π/2} sup|F'| / (4ℓ)`; below 1 the fixed-point map contracts.
    pub contraction_margin: f64,
    /// `N_ℓ = ⌊2ℓr/π - 1/2⌋`.
    pub n_max: i64,
    pub ell: f64,
}

impl DiskGeometry {
    pub fn from_parts(radius: f64, sup_f_prime: f64, ell: f64) -> Self {
        Self {
            radius,
            sup_f_prime,
            contraction_margin: FRAC_PI_2.exp() * sup_f_prime / (4.0 * ell),
            n_max: (2.0 * ell * radius / PI - 0.5).floor() as i64,
            ell,
        }
    }

    /// Same disk, different separation (`r` and `sup|F'|` depend on the
    /// halves only).
    pub fn with_ell(&self, ell: f64) -> Self {
        Self::from_parts(self.radius, self.sup_f_prime, ell)
    }

    pub fn is_contracting(&self) -> bool {
        self.contraction_margin < 1.0
    }

    /// Radius `π/(4ℓ)` of each ball `B_n`.
    pub fn ball_radius(&self) -> f64 {
        PI / (4.0 * self.ell)
    }

    pub fn is_certified(&self, n: i64) -> bool {
        self.is_contracting() && n.abs() <= self.n_max
    }
}

/// Runs the radius search, bounds `|F'|` on the disk by sampling it on the
/// boundary circle, and derives the contraction margin and `N_ℓ`.
pub fn disk_geometry(problem: &BipartiteProblem, opts: &GeometryOptions) -> Result<DiskGeometry> {
    let radius = estimate_radius_with(problem, opts)?;
    let ring = boundary_ring_radius(radius);
    let sup = circle_points(radius, opts.boundary_samples).try_fold(0.0f64, |acc, k| {
        f_prime(problem, k, ring, opts.quadrature_nodes).map(|d| acc.max(d.norm()))
    })?;
    Ok(DiskGeometry::from_parts(
        radius,
        sup * opts.sup_inflation,
        problem.ell(),
    ))
}
