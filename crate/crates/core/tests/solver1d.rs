mod common;

use std::f64::consts::PI;

use fracwave::harness::{manufactured_problem, Example, Manufactured};
use fracwave::mesh::{SpatialMesh1D, TimeMesh};
use fracwave::solver1d::{assemble_rhs, solve, solve_fast, solve_stepping, Backend, MultiTermSpec, Problem1D, TimeOperator};
use fracwave::special::gamma;
use fracwave::Error;

fn meshes(p: &Problem1D, n: usize, m: usize) -> (TimeMesh, SpatialMesh1D) {
    (TimeMesh::new(p.horizon(), n).unwrap(), SpatialMesh1D::new(p.length(), m).unwrap())
}

fn ex1(alpha1: f64, alpha2: f64) -> Problem1D {
    match manufactured_problem(&Example::Ex1 { alpha1, alpha2 }).unwrap() {
        Manufactured::OneD { problem, .. } => problem,
        _ => unreachable!(),
    }
}

#[test]
fn zero_data_gives_zero_solution() {
    let p = Problem1D::new(PI, 1.0, MultiTermSpec::unit(&[0.4, 1.6]).unwrap()).unwrap().with_reaction(2.0);
    let (t, s) = meshes(&p, 40, 12);
    for backend in [Backend::Stepping, Backend::Fast] {
        assert_eq!(solve(&p, &t, &s, backend).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn backends_agree_over_a_grid_of_resolutions() {
    let p = ex1(0.3, 1.4);
    for n in [8usize, 16, 32] {
        for m in [8usize, 16] {
            let (t, s) = meshes(&p, n, m);
            let a = solve_fast(&p, &t, &s).unwrap();
            let b = solve_stepping(&p, &t, &s).unwrap();
            let rel = a.max_abs_diff(&b) / b.max_abs();
            assert!(rel < 1e-12, "N={n} M={m}: {rel:e}");
        }
    }
}

/// Plugs a grid function into the all-at-once system, returning its rows
/// minus the assembled right-hand side.
fn all_at_once_residual(p: &Problem1D, t: &TimeMesh, s: &SpatialMesh1D, u: &ndarray::Array2<f64>) -> f64 {
    let op = TimeOperator::new(p.spec(), p.reaction(), t).unwrap();
    let b = assemble_rhs(p, t, s).unwrap();
    let (steps, m) = (t.steps(), s.cells());
    let mu = op.stiffness(s.h());
    let interior = |n: usize, i: usize| if i == 0 || i == m { 0.0 } else { u[[n, i]] };
    let mut worst: f64 = 0.0;
    let scale = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for i in 1..m {
        let avg: Vec<f64> = (1..=steps)
            .map(|n| (interior(n, i - 1) + 10.0 * interior(n, i) + interior(n, i + 1)) / 12.0)
            .collect();
        let time_part = op.apply(&avg).unwrap();
        for n in 1..=steps {
            let stiff = 2.0 * interior(n, i) - interior(n, i - 1) - interior(n, i + 1);
            let lhs = time_part[n - 1] + op.reaction() * avg[n - 1] + mu * stiff;
            worst = worst.max((lhs - b[[n - 1, i - 1]]).abs());
        }
    }
    worst / scale
}

#[test]
fn stepping_solution_satisfies_the_all_at_once_system() {
    let homogeneous = ex1(0.5, 1.5);
    let lifted = Problem1D::new(2.0, 1.0, MultiTermSpec::from_pairs(&[(1.0, 0.6), (0.5, 1.3)]).unwrap())
        .unwrap()
        .with_reaction(0.7)
        .with_initial(|x| 1.0 + x * x)
        .with_velocity(|x| x.cos())
        .with_boundary(|t| 1.0 + t.sin(), |t| 5.0 * (1.0 - t).exp())
        .with_source(|x, t| x * t.sqrt());
    for p in [homogeneous, lifted] {
        let (t, s) = meshes(&p, 48, 10);
        let u = solve_stepping(&p, &t, &s).unwrap();
        let r = all_at_once_residual(&p, &t, &s, u.values());
        assert!(r < 1e-12, "residual {r:e}");
    }
}

/// `u_t + u_tt + c u = u_xx + f` by backward Euler, the three-level central
/// difference with a Taylor first step and the compact spatial stencil.
fn classical_scheme(p: &Problem1D, n: usize, m: usize) -> Vec<Vec<f64>> {
    let tau = p.horizon() / n as f64;
    let h = p.length() / m as f64;
    let c = p.reaction();
    let x: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
    let avg = |v: &[f64], i: usize| (v[i - 1] + 10.0 * v[i] + v[i + 1]) / 12.0;
    let mut levels = vec![(0..=m).map(|i| if i == 0 || i == m { 0.0 } else { p.initial(x[i]) }).collect::<Vec<f64>>()];
    let phi1: Vec<f64> = x.iter().map(|&xi| p.velocity(xi)).collect();
    for k in 1..=n {
        let t = k as f64 * tau;
        // a u^k - known(k) with a = 1/τ + 2/τ² at the first step, 1/τ + 1/τ² afterwards
        let a = if k == 1 { 1.0 / tau + 2.0 / (tau * tau) } else { 1.0 / tau + 1.0 / (tau * tau) } + c;
        let known: Vec<f64> = (0..=m)
            .map(|i| {
                let prev = levels[k - 1][i];
                if k == 1 {
                    prev / tau + 2.0 * (prev + tau * phi1[i]) / (tau * tau)
                } else {
                    prev / tau + (2.0 * prev - levels[k - 2][i]) / (tau * tau)
                }
            })
            .collect();
        let f: Vec<f64> = x.iter().map(|&xi| p.source(xi, t)).collect();
        let rhs: Vec<f64> = (1..m).map(|i| avg(&f, i) + avg(&known, i)).collect();
        let off = a / 12.0 - 1.0 / (h * h);
        let diag = 10.0 * a / 12.0 + 2.0 / (h * h);
        let sol = common::thomas(&vec![off; m - 1], &vec![diag; m - 1], &vec![off; m - 1], &rhs);
        let mut next = vec![0.0; m + 1];
        next[1..m].copy_from_slice(&sol);
        levels.push(next);
    }
    levels
}

#[test]
fn integer_orders_match_the_classical_scheme() {
    let p = Problem1D::new(PI, 1.0, MultiTermSpec::unit(&[1.0, 2.0]).unwrap())
        .unwrap()
        .with_reaction(1.5)
        .with_initial(|x| x.sin() + 0.2 * (2.0 * x).sin())
        .with_velocity(|x| x * (PI - x))
        .with_source(|x, t| (3.0 * x).sin() * (1.0 + t * t));
    let (n, m) = (40, 12);
    let reference = classical_scheme(&p, n, m);
    let (t, s) = meshes(&p, n, m);
    for backend in [Backend::Stepping, Backend::Fast] {
        let u = solve(&p, &t, &s, backend).unwrap();
        let worst = (0..=n)
            .flat_map(|k| (0..=m).map(move |i| (k, i)))
            .map(|(k, i)| (u.at(k, i) - reference[k][i]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "{backend:?}: {worst:e}");
    }
}

#[test]
fn affine_and_quadratic_solutions_are_reproduced_exactly() {
    // u = (1 + x)(1 + 2t): L1 is exact on linear time data, the compact stencil on linear x
    let g = 2.0 / gamma(1.5);
    let sub = Problem1D::new(1.0, 1.0, MultiTermSpec::unit(&[0.5]).unwrap())
        .unwrap()
        .with_reaction(1.0)
        .with_initial(|x| 1.0 + x)
        .with_boundary(|t| 1.0 + 2.0 * t, |t| 2.0 * (1.0 + 2.0 * t))
        .with_source(move |x, t| (1.0 + x) * (g * t.sqrt() + 1.0 + 2.0 * t));
    // u = (1 + x)(1 + t + t²): L2 with its velocity correction is exact on quadratics
    let wave = Problem1D::new(1.0, 1.0, MultiTermSpec::unit(&[1.5]).unwrap())
        .unwrap()
        .with_initial(|x| 1.0 + x)
        .with_velocity(|x| 1.0 + x)
        .with_boundary(|t| 1.0 + t + t * t, |t| 2.0 * (1.0 + t + t * t))
        .with_source(move |x, t| (1.0 + x) * g * t.sqrt());
    let exact = [
        Box::new(|x: f64, t: f64| (1.0 + x) * (1.0 + 2.0 * t)) as Box<dyn Fn(f64, f64) -> f64>,
        Box::new(|x: f64, t: f64| (1.0 + x) * (1.0 + t + t * t)),
    ];
    for (p, u_exact) in [sub, wave].iter().zip(&exact) {
        let (t, s) = meshes(p, 32, 8);
        let u = solve_stepping(p, &t, &s).unwrap();
        let worst = (0..=32).map(|n| u.max_error(n, u_exact)).fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst:e}");
        assert!(matches!(solve_fast(p, &t, &s), Err(Error::Config(_))));
    }
}

#[test]
fn nearly_coincident_orders_behave_like_one_term() {
    let base = ex1(0.5, 1.5);
    let split = base.clone().with_spec(
        MultiTermSpec::from_pairs(&[(0.5, 0.5), (0.5, 0.5 + 1e-7), (1.0, 1.5)]).unwrap(),
    );
    let (t, s) = meshes(&base, 64, 16);
    let a = solve_fast(&base, &t, &s).unwrap();
    let b = solve_fast(&split, &t, &s).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-6 * a.max_abs());
}

#[test]
fn multi_term_agreement_with_many_orders() {
    let spec = MultiTermSpec::from_pairs(&[(0.3, 0.1), (1.0, 0.45), (2.0, 0.9), (0.7, 1.15), (1.2, 1.6), (0.4, 1.99)]).unwrap();
    let p = Problem1D::new(PI, 2.0, spec)
        .unwrap()
        .with_reaction(0.3)
        .with_initial(|x| x.sin())
        .with_velocity(|x| (2.0 * x).sin())
        .with_source(|x, t| (x * (PI - x)) * t.cos());
    let (t, s) = meshes(&p, 100, 20);
    let a = solve_fast(&p, &t, &s).unwrap();
    let b = solve_stepping(&p, &t, &s).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-12 * b.max_abs());
}

#[test]
fn configuration_errors() {
    let spec = MultiTermSpec::unit(&[0.5, 1.5]).unwrap();
    assert!(matches!(Problem1D::new(-1.0, 1.0, spec.clone()), Err(Error::Config(_))));
    let p = Problem1D::new(PI, 1.0, spec.clone()).unwrap();
    let (t, s) = meshes(&p, 8, 8);
    assert!(matches!(solve_fast(&p.clone().without_velocity(), &t, &s), Err(Error::Config(_))));
    assert!(matches!(solve_stepping(&p.clone().with_reaction(-1.0), &t, &s), Err(Error::Config(_))));
    let wrong_horizon = TimeMesh::new(2.0, 8).unwrap();
    assert!(matches!(solve_fast(&p, &wrong_horizon, &s), Err(Error::Config(_))));
    assert!(MultiTermSpec::unit(&[0.5, 0.5]).is_err());
    assert!(MultiTermSpec::from_pairs(&[(0.0, 0.5)]).is_err());
    assert!(MultiTermSpec::unit(&[]).is_err());
    assert_eq!("fast".parse::<Backend>().unwrap(), Backend::Fast);
    assert!("gpu".parse::<Backend>().is_err());
}
