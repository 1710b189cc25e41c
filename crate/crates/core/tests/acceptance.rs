//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p fpladder --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fpladder::characteristic::{
    disk_geometry, eval_f, eval_f_delta_closed_form, eval_f_step_closed_form, DiskGeometry,
    GeometryOptions,
};
use fpladder::ladder::{
    apriori_error_bound, fixed_point_iterates, residual, solve_entry, solve_ladder,
    Classification, LadderEntry, SolveOptions,
};
use fpladder::oracle::{newton_refine, winding_number, NEWTON_RESIDUAL_TOL};
use fpladder::series::{three_term_delta, three_term_step, SeriesEngine, SeriesOptions};
use fpladder::{BipartiteProblem, Complex, HalfPotential};
use rand::{Rng, SeedableRng};

const ELL: f64 = 100.0;
const STEP_TOL: f64 = 1e-15;
const MAX_ITERATIONS: usize = 15;
const RESIDUAL_TOL: f64 = 1e-11;
const CLOSED_FORM_RTOL: f64 = 1e-10;
const F_AT_ZERO_TOL: f64 = 1e-12;
const NEWTON_MATCH_TOL: f64 = 1e-12;
const SLOPE_TARGET: f64 = -4.0;
const SLOPE_TOL: f64 = 0.3;
const SYMMETRY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[derive(Clone, Copy)]
enum Shape {
    Step { minus: Complex, plus: Complex },
    Delta { minus: Complex, plus: Complex },
}

struct Case {
    name: &'static str,
    shape: Shape,
    problem: BipartiteProblem,
    geometry: DiskGeometry,
    ladder: Vec<LadderEntry>,
}

impl Case {
    fn new(name: &'static str, shape: Shape) -> Self {
        let problem = problem_for(shape, ELL);
        let geometry = disk_geometry(&problem, &GeometryOptions::default()).expect("geometry");
        let solution = solve_ladder(
            &problem,
            &geometry,
            -geometry.n_max,
            geometry.n_max,
            &SolveOptions::default(),
        );
        assert!(
            solution.is_complete(),
            "{name}: ladder failures {:?}",
            solution.failures
        );
        Self {
            name,
            shape,
            problem,
            geometry,
            ladder: solution.entries,
        }
    }

    fn closed_form(&self, k: Complex) -> Complex {
        match self.shape {
            Shape::Step { minus, plus } => eval_f_step_closed_form(minus, plus, k).unwrap(),
            Shape::Delta { minus, plus } => eval_f_delta_closed_form(minus, plus, k).unwrap(),
        }
    }
}

fn problem_for(shape: Shape, ell: f64) -> BipartiteProblem {
    let (minus, plus) = match shape {
        Shape::Step { minus, plus } => (HalfPotential::step(minus, 1.0), HalfPotential::step(plus, 1.0)),
        Shape::Delta { minus, plus } => (HalfPotential::delta(minus), HalfPotential::delta(plus)),
    };
    BipartiteProblem::new(minus, plus, ell).unwrap()
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn convergence_budget(case: &Case) -> (bool, String) {
    let worst_iter = case.ladder.iter().map(|e| e.iterations).max().unwrap_or(0);
    let worst_step = case.ladder.iter().map(|e| e.last_step).fold(0.0, f64::max);
    let ok = worst_iter <= MAX_ITERATIONS && worst_step < STEP_TOL;
    (
        ok,
        format!(
            "{}: N = {}, r = {:.4}, margin = {:.4}, max iterations {worst_iter}, max last step {worst_step:.1e}",
            case.name, case.geometry.n_max, case.geometry.radius, case.geometry.contraction_margin
        ),
    )
}

fn all_resonant(case: &Case) -> Outcome {
    let (budget, detail) = convergence_budget(case);
    // k_0 = 0 exactly; every other entry must lie in the lower half-plane
    let bad: Vec<i64> = case
        .ladder
        .iter()
        .filter(|e| {
            if e.n == 0 {
                e.classification != Classification::NearZero
            } else {
                !(e.k.im < 0.0 && e.classification == Classification::Resonance)
            }
        })
        .map(|e| e.n)
        .collect();
    outcome(
        budget && bad.is_empty() && case.ladder.len() as i64 == 2 * case.geometry.n_max + 1,
        format!("{detail}, non-resonant n: {bad:?}"),
    )
}

fn mixed_signs(case: &Case) -> Outcome {
    let (budget, detail) = convergence_budget(case);
    let up = case.ladder.iter().filter(|e| e.k.im > 0.0).count();
    let down = case.ladder.iter().filter(|e| e.k.im < 0.0).count();
    outcome(
        budget && up > 0 && down > 0,
        format!("{detail}, eigenvalues {up}, resonances {down}"),
    )
}

fn residuals(cases: &[&Case]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for case in cases {
        let worst = case
            .ladder
            .iter()
            .map(|e| residual(&case.problem, e.k).unwrap())
            .fold(0.0, f64::max);
        ok &= worst <= RESIDUAL_TOL;
        parts.push(format!("{} max {worst:.1e}", case.name));
    }
    outcome(ok, parts.join(", "))
}

fn closed_forms(cases: &[&Case]) -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut ok = true;
    let mut parts = Vec::new();
    for case in cases {
        let r = case.geometry.radius;
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let rho = r * rng.gen::<f64>().sqrt();
            let k = Complex::from_polar(rho, 2.0 * PI * rng.gen::<f64>());
            let a = eval_f(&case.problem, k).unwrap();
            let b = case.closed_form(k);
            worst = worst.max((a - b).norm() / b.norm());
        }
        let f0 = (eval_f(&case.problem, c(0.0, 0.0)).unwrap() - 1.0).norm();
        ok &= worst <= CLOSED_FORM_RTOL && f0 <= F_AT_ZERO_TOL;
        parts.push(format!("{} rel {worst:.1e}, |F(0)-1| {f0:.1e}", case.name));
    }
    outcome(ok, parts.join(", "))
}

fn uniqueness(cases: &[&Case]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for case in cases {
        let radius = PI / (4.0 * ELL);
        let mut windings_ok = true;
        let mut worst = 0.0f64;
        for e in &case.ladder {
            let w = winding_number(&case.problem, c(e.a_n, 0.0), radius, 4096);
            windings_ok &= matches!(w, Ok(1));
            match newton_refine(&case.problem, c(e.a_n, 0.0), NEWTON_RESIDUAL_TOL, 50) {
                Ok(root) => worst = worst.max((root.root - e.k).norm()),
                Err(_) => worst = f64::INFINITY,
            }
        }
        ok &= windings_ok && worst <= NEWTON_MATCH_TOL;
        parts.push(format!(
            "{}: {} balls, windings all 1: {windings_ok}, max |newton - k| {worst:.1e}",
            case.name,
            case.ladder.len()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn slope(ells: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ells.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

fn three_term_decay() -> Outcome {
    let ells = [50.0, 100.0, 200.0];
    let shapes = [
        ("delta(1,1)", Shape::Delta { minus: c(1.0, 0.0), plus: c(1.0, 0.0) }),
        ("step(2i,1)", Shape::Step { minus: c(0.0, 2.0), plus: c(1.0, 0.0) }),
    ];
    // n = 5 at ℓ = 50 lies just beyond N_ℓ for the delta pair; iterate anyway
    let opts = SolveOptions {
        best_effort: true,
        ..Default::default()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, shape) in shapes {
        let base = problem_for(shape, ells[0]);
        let geometry = disk_geometry(&base, &GeometryOptions::default()).unwrap();
        for n in [1i64, 3, 5] {
            let errs: Vec<f64> = ells
                .iter()
                .map(|&ell| {
                    let p = problem_for(shape, ell);
                    let k = solve_entry(&p, &geometry.with_ell(ell), n, &opts).unwrap().k;
                    let approx = match shape {
                        Shape::Delta { minus, plus } => three_term_delta(minus, plus, n, ell),
                        Shape::Step { minus, plus } => three_term_step(minus, plus, n, ell),
                    }
                    .unwrap();
                    (k - approx).norm()
                })
                .collect();
            let s = slope(&ells, &errs);
            ok &= (s - SLOPE_TARGET).abs() <= SLOPE_TOL;
            parts.push(format!("{name} n={n} slope {s:.3}"));
        }
    }
    outcome(ok, parts.join(", "))
}

fn remainder_bounds(cases: &[&Case]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for case in cases {
        let engine =
            SeriesEngine::new(&case.problem, &case.geometry, &SeriesOptions::default()).unwrap();
        let mut series_ok = true;
        let mut worst_ratio = 0.0f64;
        for order in 1..=4 {
            for e in &case.ladder {
                let s = engine.at_ball_center(e.n, order).unwrap();
                let err = (s.value - e.k).norm();
                series_ok &= err <= s.bound;
                worst_ratio = worst_ratio.max(err / s.bound);
            }
        }
        let mut apriori_ok = true;
        let mut worst_apriori = 0.0f64;
        for e in &case.ladder {
            let run = fixed_point_iterates(&case.problem, e.n, STEP_TOL, 200).unwrap();
            let limit = run.last();
            for (i, z) in run.iterates.iter().enumerate() {
                let m = i + 1;
                let bound = apriori_error_bound(m, ELL, case.geometry.sup_f_prime);
                let err = (limit - z).norm();
                apriori_ok &= err <= bound;
                worst_apriori = worst_apriori.max(err / bound);
            }
        }
        ok &= series_ok && apriori_ok;
        parts.push(format!(
            "{}: max err/bound series {worst_ratio:.2}, iterates {worst_apriori:.2}",
            case.name
        ));
    }
    outcome(ok, parts.join("; "))
}

fn symmetry(case: &Case) -> Outcome {
    assert!(case.problem.is_real());
    let worst = case
        .ladder
        .iter()
        .filter(|e| e.n > 0)
        .map(|e| {
            let mirror = case.ladder.iter().find(|m| m.n == -e.n).unwrap();
            (mirror.k + e.k.conj()).norm()
        })
        .fold(0.0, f64::max);
    outcome(
        worst <= SYMMETRY_TOL,
        format!("{}: max |k_-n + conj(k_n)| {worst:.1e}", case.name),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let barrier_well = Case::new(
        "step(2i,1)",
        Shape::Step { minus: c(0.0, 2.0), plus: c(1.0, 0.0) },
    );
    let complex_well = Case::new(
        "step(3+2i,1)",
        Shape::Step { minus: c(3.0, 2.0), plus: c(1.0, 0.0) },
    );
    let delta = Case::new(
        "delta(1,1)",
        Shape::Delta { minus: c(1.0, 0.0), plus: c(1.0, 0.0) },
    );
    let all = [&barrier_well, &complex_well, &delta];

    let criteria: Vec<Criterion> = vec![
        ("AC1 barrier-well ladder: all resonances, <= 15 iterations", Box::new(|| all_resonant(&barrier_well))),
        ("AC2 complex-well ladder: resonances and eigenvalues coexist", Box::new(|| mixed_signs(&complex_well))),
        ("AC3 residual |e^{4ikl} - F(k)| <= 1e-11", Box::new(|| residuals(&all))),
        ("AC4 closed forms vs transfer matrices (rel 1e-10), F(0) = 1", Box::new(|| closed_forms(&all))),
        ("AC5 one root per ball, Newton agreement <= 1e-12", Box::new(|| uniqueness(&all))),
        ("AC6 three-term discrepancy decays as l^-4", Box::new(three_term_decay)),
        ("AC7 series remainder and a-priori iterate bounds honoured", Box::new(|| remainder_bounds(&all))),
        ("AC8 k_-n = -conj(k_n) for real potentials", Box::new(|| symmetry(&barrier_well))),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let t = Instant::now();
        let result = run();
        if !result.passed {
            failed += 1;
        }
        println!(
            "[{}] {name} ({:.2}s)\n       {}",
            if result.passed { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
