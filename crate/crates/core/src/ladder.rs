//! Fixed-point solution of `e^{4ikℓ} = F(k)` in each ball
//! `B_n = {|k - a_n| < π/(4ℓ)}`, `a_n = πn/(2ℓ)`.
//!
//! Writing `k = a_n + z`, the equation becomes `z = -(i/4ℓ) ln F(z + a_n)`
//! with the principal logarithm. On the certified disk this map is a
//! contraction, so iterating from `z = 0` converges geometrically.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::characteristic::{eval_f, DiskGeometry};
use crate::{BipartiteProblem, Complex, Error, Result, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `Im k > 0`: square-integrable bound state.
    Eigenvalue,
    /// `Im k < 0`.
    Resonance,
    /// Nonzero `k` on the real axis within tolerance.
    SpectralSingularityCandidate,
    /// `|k|` within tolerance of zero.
    NearZero,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Eigenvalue => "eigenvalue",
            Classification::Resonance => "resonance",
            Classification::SpectralSingularityCandidate => "spectral_singularity",
            Classification::NearZero => "near_zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eigenvalue" => Some(Classification::Eigenvalue),
            "resonance" => Some(Classification::Resonance),
            "spectral_singularity" => Some(Classification::SpectralSingularityCandidate),
            "near_zero" => Some(Classification::NearZero),
            _ => None,
        }
    }
}

/// One solved wavenumber of the ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderEntry {
    pub n: i64,
    pub a_n: f64,
    pub k: Complex,
    pub iterations: usize,
    /// `|z_m - z_{m-1}|` at the final iterate.
    pub last_step: f64,
    /// `|e^{4ikℓ} - F(k)|`.
    pub residual: f64,
    pub classification: Classification,
    /// A-priori error bound after `iterations` steps.
    pub apriori_bound: f64,
    /// `|n| ≤ N_ℓ` and the contraction margin is below 1.
    pub certified: bool,
}

impl LadderEntry {
    /// The spectral parameter `λ = k²`.
    pub fn lambda(&self) -> Complex {
        self.k * self.k
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Stop when successive iterates differ by less than this.
    pub tol: f64,
    pub max_iter: usize,
    pub imag_tol: f64,
    pub zero_tol: f64,
    /// Accepted `|e^{4ikℓ} - F(k)|`; `None` means `10³ · tol · max(1, 4ℓ)`.
    pub residual_tol: Option<f64>,
    /// Iterate even outside the certified range or without contraction.
    pub best_effort: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            max_iter: 200,
            imag_tol: 1e-12,
            zero_tol: 1e-12,
            residual_tol: None,
            best_effort: false,
        }
    }
}

impl SolveOptions {
    pub fn residual_tolerance(&self, ell: f64) -> f64 {
        self.residual_tol
            .unwrap_or(1e3 * self.tol * (4.0 * ell).max(1.0))
    }
}

/// `a_n = πn/(2ℓ)`.
pub fn ball_center(n: i64, ell: f64) -> f64 {
    PI * n as f64 / (2.0 * ell)
}

/// Iterates `z_{m+1} = -(i/4ℓ) ln F(z_m + a_n)` from `z_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRun {
    /// `z_1, z_2, …` (offsets from `a_n`).
    pub iterates: Vec<Complex>,
    pub last_step: f64,
    pub converged: bool,
}

impl FixedPointRun {
    pub fn last(&self) -> Complex {
        self.iterates.last().copied().unwrap_or_default()
    }
}

pub fn fixed_point_iterates(
    problem: &BipartiteProblem,
    n: i64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointRun> {
    let ell = problem.ell();
    let a_n = ball_center(n, ell);
    let scale = -I / (4.0 * ell);
    let mut z = Complex::new(0.0, 0.0);
    let mut iterates = Vec::new();
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iter {
        let k = z + a_n;
        let f = eval_f(problem, k)?;
        if f == Complex::new(0.0, 0.0) {
            return Err(Error::LogArgumentZero(k));
        }
        let next = scale * f.ln();
        last_step = (next - z).norm();
        iterates.push(next);
        z = next;
        if last_step < tol {
            return Ok(FixedPointRun {
                iterates,
                last_step,
                converged: true,
            });
        }
    }
    Ok(FixedPointRun {
        iterates,
        last_step,
        converged: false,
    })
}

pub fn classify(k: Complex, imag_tol: f64, zero_tol: f64) -> Classification {
    if k.norm() <= zero_tol {
        Classification::NearZero
    } else if k.im > imag_tol {
        Classification::Eigenvalue
    } else if k.im < -imag_tol {
        Classification::Resonance
    } else {
        Classification::SpectralSingularityCandidate
    }
}

/// `|e^{4ikℓ} - F(k)|`.
pub fn residual(problem: &BipartiteProblem, k: Complex) -> Result<f64> {
    let f = eval_f(problem, k)?;
    let wave = (4.0 * problem.ell() * I * k).exp();
    Ok((wave - f).norm())
}

/// `π e^{mπ/2} (4ℓ)^{-(m+1)} (sup|F'|)^m`, the distance bound between
/// `k_n` and the `m`-th iterate. Independent of `n`.
pub fn apriori_error_bound(m: usize, ell: f64, sup_f_prime: f64) -> f64 {
    let q = FRAC_PI_2.exp() * sup_f_prime / (4.0 * ell);
    PI / (4.0 * ell) * q.powi(m as i32)
}

pub fn solve_entry(
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
    n: i64,
    opts: &SolveOptions,
) -> Result<LadderEntry> {
    if !opts.best_effort {
        if !geometry.is_contracting() {
            return Err(Error::NotContracting(geometry.contraction_margin));
        }
        if n.abs() > geometry.n_max {
            return Err(Error::OutOfCertifiedRange {
                n,
                n_max: geometry.n_max,
            });
        }
    }
    let run = fixed_point_iterates(problem, n, opts.tol, opts.max_iter)?;
    let a_n = ball_center(n, problem.ell());
    let k = a_n + run.last();
    if !run.converged {
        return Err(Error::NotConverged {
            last: k,
            iterations: run.iterates.len(),
            last_step: run.last_step,
        });
    }
    let res = residual(problem, k)?;
    let tolerance = opts.residual_tolerance(problem.ell());
    if res > tolerance {
        return Err(Error::ResidualTooLarge {
            k,
            residual: res,
            tolerance,
        });
    }
    let iterations = run.iterates.len();
    Ok(LadderEntry {
        n,
        a_n,
        k,
        iterations,
        last_step: run.last_step,
        residual: res,
        classification: classify(k, opts.imag_tol, opts.zero_tol),
        apriori_bound: apriori_error_bound(iterations, problem.ell(), geometry.sup_f_prime),
        certified: geometry.is_certified(n),
    })
}

/// Entries that solved and indices that failed, both ordered by `n`.
#[derive(Debug, Clone, Default)]
pub struct LadderSolution {
    pub entries: Vec<LadderEntry>,
    pub failures: Vec<(i64, Error)>,
}

impl LadderSolution {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Solves every `n` in `n_lo..=n_hi` independently (in parallel); a failing
/// index does not stop the others.
pub fn solve_ladder(
    problem: &BipartiteProblem,
    geometry: &DiskGeometry,
    n_lo: i64,
    n_hi: i64,
    opts: &SolveOptions,
) -> LadderSolution {
    let outcomes: Vec<(i64, Result<LadderEntry>)> = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| (n, solve_entry(problem, geometry, n, opts)))
        .collect();
    let mut solution = LadderSolution::default();
    for (n, outcome) in outcomes {
        match outcome {
            Ok(entry) => solution.entries.push(entry),
            Err(e) => solution.failures.push((n, e)),
        }
    }
    solution
}
