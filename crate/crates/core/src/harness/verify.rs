//! Property and cross-validation suites.
//!
//! Each check reports its worst measured quantity next to the limit it was
//! held to, so callers can print or re-assert them.

use std::f64::consts::PI;

use ndarray::Array2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::kernels::{
    apply_l1, apply_l2, caputo_monomial, l1_coefficients, l2_coefficients, FractionalOrder, TimeSequence,
};
use crate::mesh::{SpatialMesh1D, SpatialMesh2D, TimeMesh};
use crate::solver1d::{solve_fast, solve_stepping, MultiTermSpec, Problem1D};
use crate::solver2d::{solve_2d_fast, solve_2d_stepping, Problem2D};
use crate::special::gamma;
use crate::toeplitz::{
    forward_substitution, sine_spectrum, solve_lower_tri_toeplitz, toeplitz_matvec, LowerTriangular,
    SineTransform, TriDiagToeplitz,
};

use super::manufactured::{manufactured_problem, Example, Manufactured};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst measured value of the checked quantity.
    pub worst: f64,
    pub limit: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn at_most(name: &str, worst: f64, limit: f64, detail: String) -> Self {
        Self { name: name.into(), passed: worst <= limit, worst, limit, detail }
    }

    fn at_least(name: &str, worst: f64, limit: f64, detail: String) -> Self {
        Self { name: name.into(), passed: worst >= limit, worst, limit, detail }
    }

    fn within(name: &str, value: f64, lo: f64, hi: f64, detail: String) -> Self {
        let worst = if value < lo { value - lo } else if value > hi { value - hi } else { 0.0 };
        Self { name: name.into(), passed: (lo..=hi).contains(&value), worst, limit: 0.0, detail }
    }
}

const SEED: u64 = 0x5eed_f00d;

fn ord(v: f64) -> FractionalOrder {
    FractionalOrder::new(v).expect("order in (0, 2]")
}

/// Positivity, monotonicity, convexity and the two-sided bounds of the L1
/// weights, plus the identity between L2 and shifted L1 weights.
pub fn coefficient_laws(trials: usize) -> Result<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let n = 400;
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for _ in 0..trials {
        let alpha = rng.random_range(0.01..0.99);
        let a = l1_coefficients(ord(alpha), n)?;
        let g1 = gamma(1.0 - alpha);
        let lead_err = (a[0] * gamma(2.0 - alpha) - 1.0).abs();
        worst = worst.max(lead_err);
        failures += usize::from(lead_err > 1e-12);
        for k in 1..n {
            let decreasing = a[k] < a[k - 1] && a[k] > 0.0;
            let kf = k as f64;
            let lo = (kf + 1.0).powf(-alpha) / g1;
            let hi = kf.powf(-alpha) / g1;
            let slack = 1e-12 * a[k];
            let bounded = a[k] > lo - slack && a[k] < hi + slack;
            let convex = k + 1 >= n || a[k + 1] - 2.0 * a[k] + a[k - 1] >= -1e-12 * a[k - 1];
            failures += usize::from(!(decreasing && bounded && convex));
        }
        let beta = 1.0 + alpha;
        let b = l2_coefficients(ord(beta), n)?;
        let shifted = l1_coefficients(ord(beta - 1.0), n)?;
        failures += usize::from(b.values() != shifted.values());
    }
    Ok(CheckOutcome {
        name: "coefficient laws".into(),
        passed: failures == 0,
        worst,
        limit: 1e-12,
        detail: format!("{trials} random orders, {failures} violations"),
    })
}

/// `Σ_n (Σ_p a_p v_{n-p}) v_n >= 0` for random vectors.
pub fn quadratic_form_positivity(trials: usize) -> Result<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let m = rng.random_range(1..=64);
        let alpha = rng.random_range(0.01..1.0);
        let a = l1_coefficients(ord(alpha), m)?;
        let v: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (mut q, mut scale) = (0.0, 0.0);
        for n in 1..=m {
            for p in 0..n {
                let term = a[p] * v[n - p] * v[n];
                q += term;
                scale += term.abs();
            }
        }
        worst = worst.min(q / scale.max(f64::MIN_POSITIVE));
    }
    Ok(CheckOutcome::at_least(
        "quadratic form positivity",
        worst,
        -1e-14,
        format!("{trials} instances, smallest normalized form {worst:.3e}"),
    ))
}

/// `v^n δ v^n >= ½ δ (v^n)²` and its time-summed counterpart
/// `τ Σ v^n δ v^n >= ½ τ^{1-α} Σ a_{m-n} (v^n)² - t_m^{1-α}/(2Γ(2-α)) (v^0)²`.
pub fn energy_inequalities(trials: usize) -> Result<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let m = rng.random_range(1..=64);
        let alpha = rng.random_range(0.01..1.0);
        let tau: f64 = rng.random_range(0.001..0.5);
        let v: Vec<f64> = (0..=m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
        let a = l1_coefficients(ord(alpha), m)?;
        let scale = tau.powf(-alpha) * a[0] * sq.iter().fold(0.0f64, |s, x| s.max(*x)).max(1e-300);
        let mut summed = 0.0;
        for n in 1..=m {
            let dv = apply_l1(&TimeSequence::new(v[..=n].to_vec(), tau)?, ord(alpha))?;
            let dsq = apply_l1(&TimeSequence::new(sq[..=n].to_vec(), tau)?, ord(alpha))?;
            worst = worst.min((v[n] * dv - 0.5 * dsq) / scale);
            summed += tau * v[n] * dv;
        }
        let tm = m as f64 * tau;
        let rhs = 0.5 * tau.powf(1.0 - alpha) * (1..=m).map(|n| a[m - n] * sq[n]).sum::<f64>()
            - tm.powf(1.0 - alpha) / (2.0 * gamma(2.0 - alpha)) * sq[0];
        worst = worst.min((summed - rhs) / (scale * tm));
    }
    Ok(CheckOutcome::at_least(
        "energy inequalities",
        worst,
        -1e-12,
        format!("{trials} random sequences, smallest normalized slack {worst:.3e}"),
    ))
}

/// Involution of the sine transform and diagonalization of the scheme matrices.
pub fn sine_transform_properties() -> Result<Vec<CheckOutcome>> {
    let mut rng = StdRng::seed_from_u64(SEED + 3);
    let (mut involution, mut diagonal): (f64, f64) = (0.0, 0.0);
    for &m in &[2usize, 3, 8, 17, 64, 65, 100, 513, 1024, 4096] {
        let q = SineTransform::new(m)?;
        let v: Vec<f64> = (0..m - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let back = q.apply(&q.apply(&v)?)?;
        let e = back.iter().zip(&v).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        involution = involution.max(e / norm);
        for t in [TriDiagToeplitz::averaging(m)?, TriDiagToeplitz::stiffness(m)?] {
            let spec = sine_spectrum(&t)?;
            let direct = t.matvec(&v)?;
            let spectral = spec.apply_matrix(&v)?;
            let e = direct.iter().zip(&spectral).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
            diagonal = diagonal.max(e / (t.norm_inf() * norm));
        }
    }
    Ok(vec![
        CheckOutcome::at_most("sine transform involution", involution, 1e-12, "sizes 1..4095".into()),
        CheckOutcome::at_most(
            "sine diagonalization of A and S",
            diagonal,
            1e-11,
            "relative to ||T|| ||v||".into(),
        ),
    ])
}

/// Divide-and-conquer against forward substitution.
pub fn toeplitz_solver_agreement(sizes: &[usize]) -> Result<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(SEED + 4);
    let mut worst: f64 = 0.0;
    for &n in sizes {
        // generator shaped like the time matrices: dominant diagonal, decaying tail
        let mut d: Vec<f64> = (0..n).map(|k| -rng.random_range(0.0..1.0) / (1.0 + k as f64).powf(1.5)).collect();
        d[0] = 1.5 + rng.random_range(0.0..1.0);
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = solve_lower_tri_toeplitz(&d, &g)?;
        let slow = forward_substitution(LowerTriangular::Toeplitz(&d), &g)?;
        let scale = slow.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let e = fast.iter().zip(&slow).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        worst = worst.max(e / scale);
    }
    Ok(CheckOutcome::at_most(
        "triangular Toeplitz divide and conquer",
        worst,
        1e-11,
        format!("N in {sizes:?}"),
    ))
}

/// Circulant-embedding products against dense products.
pub fn toeplitz_matvec_agreement(max_size: usize) -> Result<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(SEED + 5);
    let mut worst: f64 = 0.0;
    let mut sizes = vec![1usize, 2, 3, 7, 31, 64, 100, 255];
    sizes.push(max_size);
    for &m in &sizes {
        for &n in &[m, (m / 2).max(1), m + 5] {
            let mut col: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            col[0] = row[0];
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = toeplitz_matvec(&col, &row, &x)?;
            let dense = Array2::from_shape_fn((m, n), |(i, j)| if i >= j { col[i - j] } else { row[j - i] });
            let exact = dense.dot(&ndarray::Array1::from(x.clone()));
            let scale = exact.iter().fold(1e-300f64, |s, v| s.max(v.abs()));
            let e = y.iter().zip(exact.iter()).fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
            worst = worst.max(e / scale);
        }
    }
    Ok(CheckOutcome::at_most(
        "Toeplitz matvec",
        worst,
        1e-12,
        format!("sizes up to {max_size}"),
    ))
}

/// One named backend-equivalence case.
#[derive(Clone)]
pub enum EquivalenceCase {
    OneD { name: String, problem: Problem1D, steps: usize, cells: usize },
    TwoD { name: String, problem: Problem2D, steps: usize, cells: (usize, usize), sides: (f64, f64) },
}

impl EquivalenceCase {
    pub fn name(&self) -> &str {
        match self {
            Self::OneD { name, .. } | Self::TwoD { name, .. } => name,
        }
    }

    /// `‖fast - stepping‖∞ / ‖stepping‖∞`.
    pub fn relative_mismatch(&self) -> Result<f64> {
        match self {
            Self::OneD { problem, steps, cells, .. } => {
                let time = TimeMesh::new(problem.horizon(), *steps)?;
                let space = SpatialMesh1D::new(problem.length(), *cells)?;
                let a = solve_fast(problem, &time, &space)?;
                let b = solve_stepping(problem, &time, &space)?;
                Ok(a.max_abs_diff(&b) / b.max_abs().max(f64::MIN_POSITIVE))
            }
            Self::TwoD { problem, steps, cells, sides, .. } => {
                let time = TimeMesh::new(problem.horizon(), *steps)?;
                let space = SpatialMesh2D::new(sides.0, sides.1, cells.0, cells.1)?;
                let a = solve_2d_fast(problem, &time, &space)?;
                let b = solve_2d_stepping(problem, &time, &space)?;
                Ok(a.max_abs_diff(&b) / b.max_abs().max(f64::MIN_POSITIVE))
            }
        }
    }
}

/// Eight 1D and four 2D problems covering nonzero initial data, velocity,
/// reaction, pure sub- and pure wave-type spectra.
pub fn equivalence_cases() -> Result<Vec<EquivalenceCase>> {
    let one = |name: &str, problem: Problem1D, steps, cells| EquivalenceCase::OneD {
        name: name.into(),
        problem,
        steps,
        cells,
    };
    let mut cases = Vec::new();
    for (alpha1, alpha2, steps, cells) in [(0.5, 1.5, 64, 16), (0.2, 1.2, 32, 8)] {
        if let Manufactured::OneD { problem, .. } = manufactured_problem(&Example::Ex1 { alpha1, alpha2 })? {
            cases.push(one(&format!("ex1 alpha=({alpha1}, {alpha2})"), problem, steps, cells));
        }
    }
    let sub = Problem1D::new(PI, 1.0, MultiTermSpec::from_pairs(&[(1.0, 0.3), (2.0, 0.8)])?)?
        .with_reaction(0.5)
        .with_initial(|x| x.sin() + 0.3 * (3.0 * x).sin())
        .with_source(|x, t| (x * (PI - x)) * (1.0 + t * t));
    cases.push(one("two sub-diffusive terms", sub, 32, 16));
    let wave = Problem1D::new(PI, 1.0, MultiTermSpec::unit(&[1.3, 1.8])?)?
        .with_initial(|x| (2.0 * x).sin())
        .with_velocity(|x| x * (PI - x))
        .with_source(|x, t| x.sin() * t.sqrt());
    cases.push(one("two wave terms", wave, 32, 8));
    let euler = Problem1D::new(1.0, 0.5, MultiTermSpec::unit(&[1.0])?)?
        .with_initial(|x| (PI * x).sin())
        .with_source(|x, t| x * (1.0 - x) * (-t).exp());
    cases.push(one("order one", euler, 16, 16));
    let three_level = Problem1D::new(1.0, 1.0, MultiTermSpec::unit(&[2.0])?)?
        .with_initial(|x| (PI * x).sin())
        .with_velocity(|x| (2.0 * PI * x).sin())
        .with_reaction(2.0);
    cases.push(one("order two", three_level, 16, 8));
    let three = Problem1D::new(2.0, 1.0, MultiTermSpec::from_pairs(&[(0.5, 0.4), (2.0, 1.0), (1.5, 1.6)])?)?
        .with_reaction(1.0)
        .with_initial(|x| (PI * x / 2.0).sin())
        .with_velocity(|x| x * (2.0 - x))
        .with_source(|x, t| (x * (2.0 - x)).powi(2) * (1.0 + t));
    cases.push(one("three weighted terms", three, 64, 16));
    if let Manufactured::OneD { problem, .. } =
        manufactured_problem(&Example::LowReg { nu: 1.5, alpha1: 0.75, alpha2: 1.5 })?
    {
        cases.push(one("low regularity nu=1.5", problem, 16, 8));
    }

    if let Manufactured::TwoD { problem, .. } = manufactured_problem(&Example::Ex3 { alpha1: 0.75, alpha2: 1.5 })? {
        cases.push(EquivalenceCase::TwoD {
            name: "ex3 alpha=(0.75, 1.5)".into(),
            problem,
            steps: 32,
            cells: (8, 8),
            sides: (PI, PI),
        });
    }
    if let Manufactured::TwoD { problem, .. } = manufactured_problem(&Example::Ex3 { alpha1: 0.55, alpha2: 1.1 })? {
        cases.push(EquivalenceCase::TwoD {
            name: "ex3 alpha=(0.55, 1.1), 6x10".into(),
            problem,
            steps: 16,
            cells: (6, 10),
            sides: (PI, PI),
        });
    }
    let sub2 = Problem2D::new(1.0, 2.0, 1.0, MultiTermSpec::unit(&[0.6])?)?
        .with_reaction(1.0)
        .with_initial(|x, y| (PI * x).sin() * (PI * y / 2.0).sin())
        .with_source(|x, y, t| x * (1.0 - x) * y * (2.0 - y) * (1.0 + t));
    cases.push(EquivalenceCase::TwoD {
        name: "2D single sub term on 1x2".into(),
        problem: sub2,
        steps: 24,
        cells: (8, 12),
        sides: (1.0, 2.0),
    });
    let wave2 = Problem2D::new(PI, PI, 1.0, MultiTermSpec::from_pairs(&[(1.0, 1.4), (0.5, 1.9)])?)?
        .with_velocity(|x, y| x.sin() * (2.0 * y).sin())
        .with_source(|x, y, t| (x * (PI - x)) * y.sin() * t);
    cases.push(EquivalenceCase::TwoD {
        name: "2D wave pair with velocity".into(),
        problem: wave2,
        steps: 20,
        cells: (10, 6),
        sides: (PI, PI),
    });
    Ok(cases)
}

pub fn backend_equivalence() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut names = Vec::new();
    for case in equivalence_cases()? {
        let e = case.relative_mismatch()?;
        worst = worst.max(e);
        names.push(format!("{}: {e:.2e}", case.name()));
    }
    Ok(CheckOutcome::at_most("backend equivalence", worst, 1e-11, names.join("; ")))
}

/// Slope of `log E` against `log τ` between the last two of `errors`.
fn last_slope(errors: &[(f64, f64)]) -> f64 {
    let (t0, e0) = errors[errors.len() - 2];
    let (t1, e1) = errors[errors.len() - 1];
    (e0 / e1).ln() / (t0 / t1).ln()
}

/// Observed truncation orders of the L1 and L2 operators at `t = 1` on `t³`
/// and exactness of L2 on quadratics. Returns `(l1 slopes, l2 slope, l2 quadratic error)`.
pub fn truncation_orders(alphas: &[f64], betas: &[f64]) -> Result<(Vec<(f64, f64)>, Vec<(f64, f64)>, f64)> {
    let cube = |t: f64| t * t * t;
    let mut l1 = Vec::new();
    for &alpha in alphas {
        let exact = caputo_monomial(3.0, ord(alpha), 1.0)?;
        let errs = [64usize, 128, 256, 512]
            .iter()
            .map(|&n| {
                let tau = 1.0 / n as f64;
                let v = apply_l1(&TimeSequence::sample(cube, tau, n)?, ord(alpha))?;
                Ok((tau, (v - exact).abs()))
            })
            .collect::<Result<Vec<_>>>()?;
        l1.push((alpha, last_slope(&errs)));
    }
    let mut l2 = Vec::new();
    let mut quad: f64 = 0.0;
    for &beta in betas {
        let exact = caputo_monomial(3.0, ord(beta), 1.0)?;
        let errs = [64usize, 128, 256, 512]
            .iter()
            .map(|&n| {
                let tau = 1.0 / n as f64;
                let v = apply_l2(&TimeSequence::sample(cube, tau, n)?, ord(beta), 0.0)?;
                Ok((tau, (v - exact).abs()))
            })
            .collect::<Result<Vec<_>>>()?;
        l2.push((beta, last_slope(&errs)));
        for &n in &[1usize, 2, 7, 40] {
            let tau = 0.1;
            let t = n as f64 * tau;
            let v = apply_l2(&TimeSequence::sample(|t| t * t, tau, n)?, ord(beta), 0.0)?;
            let exact = caputo_monomial(2.0, ord(beta), t)?;
            quad = quad.max((v - exact).abs() / exact.abs().max(1.0));
        }
    }
    Ok((l1, l2, quad))
}

pub fn truncation_check() -> Result<Vec<CheckOutcome>> {
    let (l1, l2, quad) = truncation_orders(&[0.2, 0.5, 0.8], &[1.2, 1.5, 1.8])?;
    let mut out = Vec::new();
    for (alpha, slope) in l1 {
        out.push(CheckOutcome::within(
            &format!("L1 truncation order, alpha={alpha}"),
            slope,
            2.0 - alpha - 0.1,
            2.0 - alpha + 0.1,
            format!("slope {slope:.4}, expected {:.2}", 2.0 - alpha),
        ));
    }
    for (beta, slope) in l2 {
        out.push(CheckOutcome::within(
            &format!("L2 truncation order, beta={beta}"),
            slope,
            0.9,
            1.1,
            format!("slope {slope:.4}, expected 1"),
        ));
    }
    out.push(CheckOutcome::at_most("L2 exact on quadratics", quad, 1e-12, format!("max error {quad:.2e}")));
    Ok(out)
}

/// Every suite, in a fixed order.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut out = vec![
        coefficient_laws(50)?,
        quadratic_form_positivity(100)?,
        energy_inequalities(100)?,
    ];
    out.extend(sine_transform_properties()?);
    out.extend([
        toeplitz_solver_agreement(&[17, 64, 100, 1024, 4096])?,
        toeplitz_matvec_agreement(256)?,
    ]);
    out.extend(truncation_check()?);
    out.push(backend_equivalence()?);
    Ok(out)
}
