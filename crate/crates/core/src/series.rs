//! Power series of `k_n` in `1/ℓ`, centred either at the ball centre `a_n`
//! or at zero, with their Lagrange-type remainder bounds, and the explicit
//! three-term expansions for the step and delta examples.
//!
//! All derivatives of `(ln F)^m` are taken by Cauchy quadrature of the
//! composed function. The maxima over the closed disk in the remainder
//! bounds are taken on its boundary circle (maximum modulus), where each
//! derivative is again a ring quadrature.

use std::f64::consts::PI;

use crate::characteristic::{
    boundary_ring_radius, check_quadrature, circle_points, derivative_from_samples,
    inner_ring_radius, ln_f, ring_samples, DiskGeometry,
};
use crate::ladder::ball_center;
use crate::{BipartiteProblem, Complex, Error, Result, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesCenter {
    AtBallCenter,
    AtZero,
}

impl SeriesCenter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesCenter::AtBallCenter => "ball_center",
            SeriesCenter::AtZero => "zero",
        }
    }
}

/// A partial sum of one of the two series for `k_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesApprox {
    pub n: i64,
    /// Truncation order `M`.
    pub order: usize,
    pub value: Complex,
    /// Remainder estimate `|k_n - value| ≤ bound`.
    pub bound: f64,
    pub center: SeriesCenter,
    /// False when the bound exceeds the ball radius `π/(4ℓ)` and so says
    /// nothing beyond `k_n ∈ B_n`.
    pub useful: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOptions {
    pub quadrature_nodes: usize,
    pub boundary_samples: usize,
    /// Multiplier on sampled boundary maxima.
    pub inflation: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            quadrature_nodes: 256,
            boundary_samples: 720,
            inflation: 1.05,
        }
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Caches `ln F` on the quadrature rings so that many `(n, M)` pairs can be
/// evaluated cheaply for one problem.
pub struct SeriesEngine<'a> {
    problem: &'a BipartiteProblem,
    geometry: DiskGeometry,
    opts: SeriesOptions,
    /// `ln F` on a ring around each boundary point of the certified disk.
    boundary_logs: Vec<Vec<Complex>>,
    boundary_ring: f64,
    /// `ln F` on the ring around `k = 0`.
    zero_logs: Vec<Complex>,
    zero_ring: f64,
}

impl<'a> SeriesEngine<'a> {
    pub fn new(
        problem: &'a BipartiteProblem,
        geometry: &DiskGeometry,
        opts: &SeriesOptions,
    ) -> Result<Self> {
        let geometry = geometry.with_ell(problem.ell());
        let nodes = opts.quadrature_nodes;
        let boundary_ring = boundary_ring_radius(geometry.radius);
        check_quadrature(boundary_ring, nodes)?;
        let log = |z: Complex| ln_f(problem, z);
        let boundary_logs = circle_points(geometry.radius, opts.boundary_samples)
            .map(|b| ring_samples(log, b, boundary_ring, nodes))
            .collect::<Result<Vec<_>>>()?;
        let zero = Complex::new(0.0, 0.0);
        let zero_ring = inner_ring_radius(geometry.radius, zero);
        let zero_logs = ring_samples(log, zero, zero_ring, nodes)?;
        Ok(Self {
            problem,
            geometry,
            opts: opts.clone(),
            boundary_logs,
            boundary_ring,
            zero_logs,
            zero_ring,
        })
    }

    pub fn geometry(&self) -> &DiskGeometry {
        &self.geometry
    }

    /// `max_{|k|=r} |d^order/dk^order g(ln F(k))|`, inflated.
    fn boundary_max<G: Fn(Complex) -> Complex>(&self, g: G, order: usize) -> f64 {
        let max = self
            .boundary_logs
            .iter()
            .map(|logs| {
                let composed: Vec<Complex> = logs.iter().map(|&l| g(l)).collect();
                derivative_from_samples(&composed, self.boundary_ring, order).norm()
            })
            .fold(0.0f64, f64::max);
        max * self.opts.inflation
    }

    fn useful(&self, bound: f64) -> bool {
        bound < self.geometry.ball_radius()
    }

    /// `a_n + Σ_{m=1}^{M} (-i)^m / (4^m m! ℓ^m) · d^{m-1}(ln F)^m/dk^{m-1}(a_n)`
    /// with the remainder bound
    /// `max |d^M (ln F)^{M+1}/dk^M| / (4^{M+1} (M+1)! ℓ^{M+1})`.
    pub fn at_ball_center(&self, n: i64, order: usize) -> Result<SeriesApprox> {
        check_order(order)?;
        if n.abs() > self.geometry.n_max {
            return Err(Error::OutOfCertifiedRange {
                n,
                n_max: self.geometry.n_max,
            });
        }
        let ell = self.problem.ell();
        let a_n = ball_center(n, ell);
        let center = Complex::new(a_n, 0.0);
        let ring = inner_ring_radius(self.geometry.radius, center);
        let logs = ring_samples(
            |z| ln_f(self.problem, z),
            center,
            ring,
            self.opts.quadrature_nodes,
        )?;

        let mut value = center;
        for m in 1..=order {
            let powered: Vec<Complex> = logs.iter().map(|l| l.powi(m as i32)).collect();
            let derivative = derivative_from_samples(&powered, ring, m - 1);
            let coeff = (-I).powi(m as i32) / (4f64.powi(m as i32) * factorial(m) * ell.powi(m as i32));
            value += coeff * derivative;
        }

        let next = order + 1;
        let max = self.boundary_max(|l| l.powi(next as i32), order);
        let bound = max / (4f64.powi(next as i32) * factorial(next) * ell.powi(next as i32));
        Ok(SeriesApprox {
            n,
            order,
            value,
            bound,
            center: SeriesCenter::AtBallCenter,
            useful: self.useful(bound),
        })
    }

    /// `Σ_{m=1}^{M} 1/(2^m m! ℓ^m) · d^{m-1}/dk^{m-1} (πn - (i/2) ln F)^m |_{k=0}`
    /// with the remainder bound
    /// `max |d^M (πn - (i/2) ln F)^{M+1}/dk^M| / (2^{M+1} (M+1)! ℓ^{M+1})`,
    /// which grows with `|n|`.
    pub fn at_zero(&self, n: i64, order: usize) -> Result<SeriesApprox> {
        check_order(order)?;
        let ell = self.problem.ell();
        let pi_n = PI * n as f64;
        let shifted = |l: Complex| pi_n - 0.5 * I * l;

        let mut value = Complex::new(0.0, 0.0);
        for m in 1..=order {
            let powered: Vec<Complex> = self
                .zero_logs
                .iter()
                .map(|&l| shifted(l).powi(m as i32))
                .collect();
            let derivative = derivative_from_samples(&powered, self.zero_ring, m - 1);
            value += derivative / (2f64.powi(m as i32) * factorial(m) * ell.powi(m as i32));
        }

        let next = order + 1;
        let max = self.boundary_max(|l| shifted(l).powi(next as i32), order);
        let bound = max / (2f64.powi(next as i32) * factorial(next) * ell.powi(next as i32));
        Ok(SeriesApprox {
            n,
            order,
            value,
            bound,
            center: SeriesCenter::AtZero,
            useful: self.useful(bound),
        })
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameter(
            "series order must be at least 1".into(),
        ));
    }
    Ok(())
}

/// One-shot [`SeriesEngine::at_ball_center`] with default quadrature.
pub fn series_at_ball_center(
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
    n: i64,
    order: usize,
) -> Result<SeriesApprox> {
    SeriesEngine::new(problem, geometry, &SeriesOptions::default())?.at_ball_center(n, order)
}

/// One-shot [`SeriesEngine::at_zero`] with default quadrature.
pub fn series_at_zero(
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
    n: i64,
    order: usize,
) -> Result<SeriesApprox> {
    SeriesEngine::new(problem, geometry, &SeriesOptions::default())?.at_zero(n, order)
}

/// Three-term expansion of `k_n` for unit-width wells `V_± = -β_±²`.
pub fn three_term_step(beta_minus: Complex, beta_plus: Complex, n: i64, ell: f64) -> Result<Complex> {
    let terms = |beta: Complex| -> Result<(Complex, Complex)> {
        let sin = beta.sin();
        if sin.norm() < 1e-12 {
            return Err(Error::SinePole(beta));
        }
        Ok((beta.cos() / sin / beta, 1.0 / (beta * beta * sin * sin)))
    };
    let (cot_p, inv_p) = terms(beta_plus)?;
    let (cot_m, inv_m) = terms(beta_minus)?;
    let cot_sum = cot_p + cot_m;
    let pi_n = PI * n as f64;
    let pi2_n2 = pi_n * pi_n;
    Ok(pi_n / (2.0 * ell) + pi_n / (4.0 * ell * ell) * cot_sum
        - 1.0 / (8.0 * ell.powi(3))
            * (I * pi2_n2 * inv_p + I * pi2_n2 * inv_m - pi_n * cot_sum * cot_sum))
}

/// Three-term expansion of `k_n` for a pair of delta interactions.
pub fn three_term_delta(beta_minus: Complex, beta_plus: Complex, n: i64, ell: f64) -> Result<Complex> {
    let zero = Complex::new(0.0, 0.0);
    if beta_minus == zero || beta_plus == zero {
        return Err(Error::ZeroStrength);
    }
    let inv_sum = 1.0 / beta_plus + 1.0 / beta_minus;
    let inv_sq_sum = 1.0 / (beta_plus * beta_plus) + 1.0 / (beta_minus * beta_minus);
    let pi_n = PI * n as f64;
    Ok(pi_n / (2.0 * ell) - pi_n / (4.0 * ell * ell) * inv_sum
        - 1.0 / (8.0 * ell.powi(3)) * (I * pi_n * pi_n * inv_sq_sum - pi_n * inv_sum * inv_sum))
}
