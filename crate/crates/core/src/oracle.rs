//! Independent checks of a solved ladder: root counting in each ball by the
//! argument principle and root polishing by Newton's method on
//! `g(k) = e^{4ikℓ} - F(k)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::characteristic::{circle_points, eval_f, f_prime, DiskGeometry};
use crate::ladder::{ball_center, LadderEntry};
use crate::{BipartiteProblem, Complex, Error, Result, I};

/// `g(k) = e^{4ikℓ} - F(k)`; its zeros are the wavenumbers of the problem.
pub fn char_g(problem: &BipartiteProblem, k: Complex) -> Result<Complex> {
    let f = eval_f(problem, k)?;
    Ok((4.0 * problem.ell() * I * k).exp() - f)
}

/// `g'(k) = 4iℓ e^{4ikℓ} - F'(k)` with `F'` from Cauchy quadrature.
pub fn char_g_prime(
    problem: &BipartiteProblem,
    k: Complex,
    ring_radius: f64,
    nodes: usize,
) -> Result<Complex> {
    let ell = problem.ell();
    let df = f_prime(problem, k, ring_radius, nodes)?;
    Ok(4.0 * ell * I * (4.0 * ell * I * k).exp() - df)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindingOptions {
    /// Starting node count on the contour.
    pub nodes: usize,
    /// Node doubling stops here.
    pub max_nodes: usize,
    /// `|g|` at or below this on the contour counts as a zero on it.
    pub zero_threshold: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self {
            nodes: 4096,
            max_nodes: 1 << 22,
            zero_threshold: 1e-13,
        }
    }
}

/// Number of zeros of `g` inside `|k - center| = radius`, by continuous
/// tracking of `arg g` around the circle.
pub fn winding_number(
    problem: &BipartiteProblem,
    center: Complex,
    radius: f64,
    nodes: usize,
) -> Result<i64> {
    winding_number_with(
        problem,
        center,
        radius,
        &WindingOptions {
            nodes,
            ..Default::default()
        },
    )
}

pub fn winding_number_with(
    problem: &BipartiteProblem,
    center: Complex,
    radius: f64,
    opts: &WindingOptions,
) -> Result<i64> {
    if opts.nodes < 3 || radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidParameter(
            "winding number needs at least 3 nodes and a positive radius".into(),
        ));
    }
    let mut nodes = opts.nodes;
    while nodes <= opts.max_nodes {
        let values = circle_points(radius, nodes)
            .map(|p| {
                let k = center + p;
                let g = char_g(problem, k)?;
                if g.norm() <= opts.zero_threshold {
                    return Err(Error::ZeroOnContour(k));
                }
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut total = 0.0;
        let mut resolved = true;
        for j in 0..nodes {
            let jump = (values[(j + 1) % nodes] / values[j]).arg();
            if jump.abs() >= PI / 2.0 {
                resolved = false;
                break;
            }
            total += jump;
        }
        if resolved {
            let turns = total / (2.0 * PI);
            let rounded = turns.round();
            if (turns - rounded).abs() >= 0.1 {
                return Err(Error::NonIntegerWinding(turns));
            }
            return Ok(rounded as i64);
        }
        nodes *= 2;
    }
    Err(Error::PhaseTrackingUnresolved(opts.max_nodes))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonRoot {
    pub root: Complex,
    pub iterations: usize,
}

/// Newton's method on `g`, stopping once `|g(k)| < tol`.
///
/// `F'` is taken on a ring of radius `π/(16ℓ)` with 64 nodes: small compared
/// with the scale on which `F` varies, so the quadrature is exact to rounding.
pub fn newton_refine(
    problem: &BipartiteProblem,
    k0: Complex,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonRoot> {
    let ring = PI / (16.0 * problem.ell());
    let mut k = k0;
    for iterations in 0..=max_iter {
        let g = char_g(problem, k)?;
        if g.norm() < tol {
            return Ok(NewtonRoot { root: k, iterations });
        }
        if iterations == max_iter {
            break;
        }
        let dg = char_g_prime(problem, k, ring, 64)?;
        if dg.norm() == 0.0 || !dg.re.is_finite() || !dg.im.is_finite() {
            return Err(Error::DerivativeVanished(k));
        }
        k -= g / dg;
    }
    Err(Error::NotConverged {
        last: k,
        iterations: max_iter,
        last_step: f64::NAN,
    })
}

/// Outcome of the independent check of one ladder entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub n: i64,
    /// Zeros of `g` inside `∂B_n`.
    pub winding: i64,
    pub newton_root: Complex,
    pub newton_iterations: usize,
    pub distance_to_ladder: f64,
    /// `winding == 1` and `distance_to_ladder ≤ tol`.
    pub agrees: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationSummary {
    pub reports: Vec<ValidationReport>,
    pub failures: Vec<(i64, Error)>,
}

impl ValidationSummary {
    pub fn all_agree(&self) -> bool {
        self.failures.is_empty() && self.reports.iter().all(|r| r.agrees)
    }
}

/// Tolerance on `|g|` used by [`cross_validate`] for the Newton stop.
pub const NEWTON_RESIDUAL_TOL: f64 = 1e-12;

pub fn validate_entry(
    problem: &BipartiteProblem,
    entry: &LadderEntry,
    tol: f64,
    winding: &WindingOptions,
) -> Result<ValidationReport> {
    let ell = problem.ell();
    let center = Complex::new(ball_center(entry.n, ell), 0.0);
    let count = winding_number_with(problem, center, PI / (4.0 * ell), winding)?;
    let newton = newton_refine(problem, center, NEWTON_RESIDUAL_TOL, 50)?;
    let distance = (newton.root - entry.k).norm();
    Ok(ValidationReport {
        n: entry.n,
        winding: count,
        newton_root: newton.root,
        newton_iterations: newton.iterations,
        distance_to_ladder: distance,
        agrees: count == 1 && distance <= tol,
    })
}

/// Checks each entry: exactly one zero of `g` in `B_n` and a Newton root,
/// started at `a_n`, within `tol` of the ladder value.
pub fn cross_validate(
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
    entries: &[LadderEntry],
    tol: f64,
) -> ValidationSummary {
    debug_assert!((geometry.ell - problem.ell()).abs() <= 1e-12 * problem.ell());
    let outcomes: Vec<(i64, Result<ValidationReport>)> = entries
        .par_iter()
        .map(|e| (e.n, validate_entry(problem, e, tol, &WindingOptions::default())))
        .collect();
    let mut summary = ValidationSummary::default();
    for (n, outcome) in outcomes {
        match outcome {
            Ok(r) => summary.reports.push(r),
            Err(e) => summary.failures.push((n, e)),
        }
    }
    summary
}
