//! Structural properties of solved ladders, checked from the outside.

use std::f64::consts::PI;

use fpladder::characteristic::{boundary_deviation, disk_geometry, log_safe_threshold, GeometryOptions};
use fpladder::ladder::{solve_ladder, SolveOptions};
use fpladder::oracle::winding_number;
use fpladder::series::{series_at_zero, three_term_step, SeriesEngine, SeriesOptions};
use fpladder::{BipartiteProblem, Complex, HalfPotential};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn step_pair(ell: f64) -> BipartiteProblem {
    BipartiteProblem::new(
        HalfPotential::step(c(0.0, 2.0), 1.0),
        HalfPotential::step(c(1.0, 0.0), 1.0),
        ell,
    )
    .unwrap()
}

fn delta_pair(ell: f64) -> BipartiteProblem {
    BipartiteProblem::new(
        HalfPotential::delta(c(1.0, 0.0)),
        HalfPotential::delta(c(1.0, 0.0)),
        ell,
    )
    .unwrap()
}

#[test]
fn radius_survives_finer_sampling() {
    for p in [step_pair(100.0), delta_pair(100.0)] {
        let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
        let dev = boundary_deviation(&p, g.radius, 4 * 720).unwrap();
        assert!(dev < log_safe_threshold(), "{dev} at r = {}", g.radius);
    }
}

#[test]
fn roots_stay_in_their_balls_and_within_bounds() {
    let p = step_pair(100.0);
    let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
    let sol = solve_ladder(&p, &g, -g.n_max, g.n_max, &SolveOptions::default());
    assert!(sol.is_complete());
    for e in &sol.entries {
        assert!((e.k - e.a_n).norm() < PI / 400.0, "n = {}", e.n);
        assert!(e.apriori_bound.is_finite() && e.apriori_bound > 0.0);
        assert!(e.apriori_bound <= PI / 400.0);
        assert!(e.certified);
    }
}

#[test]
fn ball_center_series_order_of_accuracy() {
    let base = step_pair(100.0);
    let g = disk_geometry(&base, &GeometryOptions::default()).unwrap();
    let ells = [100.0, 200.0, 400.0];
    // a_n is held at 4π/200 so that only the powers of 1/ℓ change; for fixed
    // n the centre drifts to 0 and the error decays faster than ℓ^{-(M+1)}
    for order in [1usize, 2] {
        let errs: Vec<f64> = ells
            .iter()
            .map(|&ell| {
                let n = (4.0 * ell / 100.0) as i64;
                let p = step_pair(ell);
                let geometry = g.with_ell(ell);
                let sol = solve_ladder(&p, &geometry, n, n, &SolveOptions::default());
                let k = sol.entries[0].k;
                let engine = SeriesEngine::new(&p, &geometry, &SeriesOptions::default()).unwrap();
                (engine.at_ball_center(n, order).unwrap().value - k).norm()
            })
            .collect();
        let xs: Vec<f64> = ells.iter().map(|l| l.ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let mx = xs.iter().sum::<f64>() / 3.0;
        let my = ys.iter().sum::<f64>() / 3.0;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        let expected = -((order + 1) as f64);
        assert!((slope - expected).abs() <= 0.3, "order {order}: slope {slope}, {errs:?}");
    }
}

#[test]
fn both_series_agree_within_their_bounds() {
    let p = delta_pair(100.0);
    let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
    let engine = SeriesEngine::new(&p, &g, &SeriesOptions::default()).unwrap();
    for n in 1..=3 {
        for order in 1..=3 {
            let a = engine.at_ball_center(n, order).unwrap();
            let z = engine.at_zero(n, order).unwrap();
            assert!((a.value - z.value).norm() <= a.bound + z.bound, "n = {n}, M = {order}");
        }
    }
}

#[test]
fn root_count_on_large_circle() {
    let p = delta_pair(100.0);
    let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
    let n = g.n_max;
    let radius = PI * n as f64 / 200.0 + PI / 400.0;
    let count = winding_number(&p, c(0.0, 0.0), radius, 4096).unwrap();
    assert!(count > 2 * n, "{count} zeros, N = {n}");
}

#[test]
fn parallel_solve_is_deterministic() {
    let p = step_pair(100.0);
    let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
    let a = solve_ladder(&p, &g, -g.n_max, g.n_max, &SolveOptions::default());
    let b = solve_ladder(&p, &g, -g.n_max, g.n_max, &SolveOptions::default());
    assert_eq!(a.entries, b.entries);
}

#[test]
fn three_term_step_is_the_third_order_zero_series() {
    let p = step_pair(100.0);
    let g = disk_geometry(&p, &GeometryOptions::default()).unwrap();
    for n in [-3i64, 1, 4] {
        let series = series_at_zero(&p, &g, n, 3).unwrap().value;
        let closed = three_term_step(c(0.0, 2.0), c(1.0, 0.0), n, 100.0).unwrap();
        assert!((series - closed).norm() < 1e-12, "n = {n}");
    }
}
