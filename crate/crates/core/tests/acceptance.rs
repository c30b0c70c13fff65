//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if a
//! gating criterion fails. Run with `cargo test -p fracwave --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use fracwave::distributed::solve_distributed;
use fracwave::harness::{
    manufactured_problem, observed_order, run_bench, run_refinement, verify, CheckOutcome, ConvergenceReport,
    Example, ExperimentConfig, Manufactured, RefineAxis,
};
use fracwave::mesh::{SpatialMesh1D, TimeMesh};
use fracwave::solver1d::Backend;

type Res<T> = Result<T, Box<dyn std::error::Error>>;

struct Line {
    passed: bool,
    gating: bool,
    text: String,
}

fn fmt_orders(v: &[f64]) -> String {
    v.iter().map(|o| format!("{o:.4}")).collect::<Vec<_>>().join(", ")
}

fn fmt_errors(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:.4e}")).collect::<Vec<_>>().join(", ")
}

fn refine(example: Example, axis: RefineAxis, resolutions: &[usize], steps: usize, cells: usize) -> Res<ConvergenceReport> {
    // zero leaves the refined (or default) value in place
    let mut config = ExperimentConfig::new(example, axis, resolutions.to_vec());
    if steps > 0 {
        config = config.with_steps(steps);
    }
    if cells > 0 {
        config = config.with_cells(cells);
    }
    Ok(run_refinement(&config)?)
}

fn in_window(v: &[f64], lo: f64, hi: f64) -> bool {
    !v.is_empty() && v.iter().all(|o| (lo..=hi).contains(o))
}

fn checks(outcomes: &[CheckOutcome]) -> (bool, String) {
    let passed = outcomes.iter().all(|c| c.passed);
    let text = outcomes
        .iter()
        .map(|c| format!("{} {} worst {:.2e}", if c.passed { "ok" } else { "FAILED" }, c.name, c.worst))
        .collect::<Vec<_>>()
        .join("; ");
    (passed, text)
}

fn temporal() -> Res<Line> {
    // (alpha1, alpha2, reference errors at N = 16..128, reference final order)
    let cases = [
        (0.2, 1.2, [4.4722e-2, 2.2796e-2, 1.1489e-2, 5.7626e-3], 0.9955),
        (0.5, 1.5, [5.7604e-2, 2.8439e-2, 1.3953e-2, 6.8480e-3], 1.0268),
        (0.7, 1.7, [7.5149e-2, 3.6662e-2, 1.7712e-2, 8.5411e-3], 1.0522),
    ];
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for (a1, a2, reference, last) in cases {
        let r = refine(Example::Ex1 { alpha1: a1, alpha2: a2 }, RefineAxis::Time, &[16, 32, 64, 128], 0, 16)?;
        let orders = r.orders();
        let errors = r.errors();
        let ratio_ok = errors.iter().zip(&reference).all(|(e, p)| e / p <= 2.0 && p / e <= 2.0);
        let last_ok = (orders[orders.len() - 1] - last).abs() <= 0.06;
        passed &= in_window(&orders, 0.90, 1.10) && ratio_ok && last_ok;
        parts.push(format!("({a1}, {a2}) E [{}] orders [{}]", fmt_errors(&errors), fmt_orders(&orders)));
    }
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < 10.0;
    Ok(Line {
        passed,
        gating: true,
        text: format!(
            "1 temporal order, M=16, N=16..128: {}; {secs:.1}s (orders in [0.90, 1.10], final within 0.06, errors within 2x, < 10 s)",
            parts.join("; ")
        ),
    })
}

fn spatial() -> Res<Line> {
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for (a1, a2) in [(0.2, 1.2), (0.5, 1.5), (0.7, 1.7)] {
        let r = refine(Example::Ex1 { alpha1: a1, alpha2: a2 }, RefineAxis::Space, &[4, 6, 8, 10], 1 << 20, 0)?;
        let orders = r.orders();
        passed &= in_window(&orders, 3.7, 4.35);
        parts.push(format!("({a1}, {a2}) E [{}] orders [{}]", fmt_errors(&r.errors()), fmt_orders(&orders)));
    }
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < 600.0;
    Ok(Line {
        passed,
        gating: true,
        text: format!(
            "2 spatial order, tau=2^-20, M=4..10: {}; {secs:.1}s (orders in [3.7, 4.35], < 10 min)",
            parts.join("; ")
        ),
    })
}

/// Nodal solution of the distributed example at the final time.
fn distributed_level(intervals: usize, steps: usize, cells: usize) -> Res<Vec<f64>> {
    let Manufactured::Distributed { distribution, shell, .. } = manufactured_problem(&Example::Ex2 { intervals })? else {
        return Err("ex2 is distributed".into());
    };
    let time = TimeMesh::new(1.0, steps)?;
    let space = SpatialMesh1D::new(PI, cells)?;
    Ok(solve_distributed(&distribution, &shell, &time, &space, Backend::Fast)?.level(steps))
}

fn max_error(u: &[f64], cells: usize) -> f64 {
    // exact solution sin x at t = 1
    (1..cells).map(|i| (u[i] - (PI * i as f64 / cells as f64).sin()).abs()).fold(0.0, f64::max)
}

fn distributed() -> Res<Line> {
    let start = Instant::now();
    let js = [2usize, 4, 6, 8];
    let r = refine(Example::Ex2 { intervals: 2 }, RefineAxis::Sigma, &js, 1 << 16, 16)?;
    let sigma_orders = r.orders();
    let sigma_ok = in_window(&sigma_orders, 1.7, 2.3);

    // Raw errors at tau = 2^-20, sigma = 1/128 carry a temporal plus quadrature
    // floor near 1.4e-6; extrapolating in tau (first order) and sigma (second
    // order) from (2^19, 2^20) x (J = 64, 128) isolates the spatial error.
    let cells = [4usize, 6, 8];
    let (mut raw, mut extrapolated) = (Vec::new(), Vec::new());
    for &m in &cells {
        let coarse_j = [distributed_level(64, 1 << 19, m)?, distributed_level(64, 1 << 20, m)?];
        let fine_j = [distributed_level(128, 1 << 19, m)?, distributed_level(128, 1 << 20, m)?];
        let in_time = |p: &[Vec<f64>; 2]| p[0].iter().zip(&p[1]).map(|(a, b)| 2.0 * b - a).collect::<Vec<_>>();
        let (c, f) = (in_time(&coarse_j), in_time(&fine_j));
        let ext: Vec<f64> = c.iter().zip(&f).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
        raw.push(max_error(&fine_j[1], m));
        extrapolated.push(max_error(&ext, m));
    }
    let orders = |e: &[f64]| -> Vec<f64> {
        (1..e.len())
            .filter_map(|i| observed_order(e[i - 1], e[i], cells[i - 1] as f64, cells[i] as f64))
            .collect()
    };
    let (raw_orders, ext_orders) = (orders(&raw), orders(&extrapolated));
    let space_ok = ext_orders.len() == 2 && ext_orders.iter().all(|&o| o >= 3.7);
    Ok(Line {
        passed: sigma_ok && space_ok,
        gating: true,
        text: format!(
            "3 distributed order: J=2..8 at tau=2^-16, M=16 E [{}] sigma orders [{}] (in [1.7, 2.3]); \
             M=4,6,8 extrapolated E [{}] orders [{}] (>= 3.7); raw at tau=2^-20, sigma=1/128 E [{}] orders [{}] (info); {:.1}s",
            fmt_errors(&r.errors()),
            fmt_orders(&sigma_orders),
            fmt_errors(&extrapolated),
            fmt_orders(&ext_orders),
            fmt_errors(&raw),
            fmt_orders(&raw_orders),
            start.elapsed().as_secs_f64()
        ),
    })
}

fn low_regularity() -> Res<Vec<Line>> {
    let steps = [16usize, 32, 64, 128];
    let mut passed = true;
    let (mut literal, mut single) = (Vec::new(), Vec::new());
    for (nu, a1, a2) in [(1.2, 0.6, 1.2), (1.5, 0.75, 1.5), (1.7, 0.85, 1.7)] {
        let r = refine(Example::LowReg { nu, alpha1: a1, alpha2: a2 }, RefineAxis::Time, &steps, 0, 16)?;
        let last = r.last_order().ok_or("no order")?;
        let ok = (last - (nu - 1.0)).abs() <= 0.07;
        passed &= ok;
        literal.push(format!("nu={nu} ({a1}, {a2}) order {last:.4}{}", if ok { "" } else { " OUT" }));
        let w = refine(Example::LowRegWave { nu }, RefineAxis::Time, &steps, 0, 16)?;
        single.push(format!("nu={nu} E128 {:.4e} order {:.4}", w.errors()[3], w.last_order().ok_or("no order")?));
    }
    Ok(vec![
        Line {
            passed,
            gating: true,
            text: format!("4 low regularity, N=128, M=16: {} (within 0.07 of nu-1)", literal.join("; ")),
        },
        Line {
            passed: true,
            gating: false,
            text: format!("4b low regularity, single wave term without reaction (info): {}", single.join("; ")),
        },
    ])
}

fn equivalence() -> Res<Line> {
    let start = Instant::now();
    let c = verify::backend_equivalence()?;
    let secs = start.elapsed().as_secs_f64();
    Ok(Line {
        passed: c.passed && secs < 30.0,
        gating: true,
        text: format!(
            "5 backend equivalence, {} cases: worst {:.2e} (<= 1e-11), {secs:.1}s (< 30 s)",
            verify::equivalence_cases()?.len(),
            c.worst
        ),
    })
}

fn toeplitz() -> Res<Line> {
    let (passed, text) = checks(&[
        verify::toeplitz_solver_agreement(&[17, 64, 100, 1024, 4096])?,
        verify::toeplitz_matvec_agreement(256)?,
    ]);
    Ok(Line { passed, gating: true, text: format!("6 Toeplitz solvers: {text}") })
}

fn properties() -> Res<Line> {
    let mut all = vec![
        verify::coefficient_laws(50)?,
        verify::quadratic_form_positivity(100)?,
        verify::energy_inequalities(100)?,
    ];
    all.extend(verify::sine_transform_properties()?);
    let (passed, text) = checks(&all);
    Ok(Line { passed, gating: true, text: format!("7 property suites: {text}") })
}

fn truncation() -> Res<Line> {
    let (passed, text) = checks(&verify::truncation_check()?);
    Ok(Line { passed, gating: true, text: format!("8 truncation orders: {text}") })
}

fn complexity() -> Res<Line> {
    let fast = run_bench(Backend::Fast, &[1 << 14, 1 << 15, 1 << 16, 1 << 17], 16)?;
    let stepping = run_bench(Backend::Stepping, &[1 << 11, 1 << 12, 1 << 13, 1 << 14], 16)?;
    let ratios = |rows: &[fracwave::harness::BenchRow]| rows.iter().filter_map(|r| r.ratio).collect::<Vec<_>>();
    let (rf, rs) = (ratios(&fast), ratios(&stepping));
    let passed = rf.iter().all(|&r| r <= 2.7) && rs.iter().all(|&r| r >= 3.5);
    Ok(Line {
        passed,
        gating: false,
        text: format!(
            "9 complexity (diagnostic): fast N=2^14..2^17 ratios [{}] (<= 2.7), stepping N=2^11..2^14 ratios [{}] (>= 3.5)",
            fmt_orders(&rf),
            fmt_orders(&rs)
        ),
    })
}

fn two_d() -> Res<Line> {
    let ex = Example::Ex3 { alpha1: 0.75, alpha2: 1.5 };
    let t = refine(ex, RefineAxis::Time, &[128, 256, 512, 1024], 0, 32)?;
    let s = refine(ex, RefineAxis::Space, &[4, 6, 8, 10], 1 << 18, 0)?;
    let point = t.errors()[3];
    // sup of the exact solution sin x sin y (t^3 + t + 1) at T = 0.5
    let peak = 0.125 + 0.5 + 1.0;
    let (to, so) = (t.orders(), s.orders());
    Ok(Line {
        passed: in_window(&to, 0.90, 1.10) && in_window(&so, 3.7, 4.35) && point < 1e-4,
        gating: true,
        text: format!(
            "10 2D self-convergence, (0.75, 1.5), T=0.5: M=32, N=128..1024 orders [{}] (in [0.90, 1.10]); \
             N=2^18, M=4..10 orders [{}] (in [3.7, 4.35]); max error at h=pi/32, tau=1/1024 {point:.4e} (< 1e-4), \
             relative {:.4e} (info)",
            fmt_orders(&to),
            fmt_orders(&so),
            point / peak
        ),
    })
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut crashed = false;
    let steps: [(&str, fn() -> Res<Vec<Line>>); 10] = [
        ("1", || Ok(vec![temporal()?])),
        ("2", || Ok(vec![spatial()?])),
        ("3", || Ok(vec![distributed()?])),
        ("4", low_regularity),
        ("5", || Ok(vec![equivalence()?])),
        ("6", || Ok(vec![toeplitz()?])),
        ("7", || Ok(vec![properties()?])),
        ("8", || Ok(vec![truncation()?])),
        ("9", || Ok(vec![complexity()?])),
        ("10", || Ok(vec![two_d()?])),
    ];
    for (id, run) in steps {
        match run() {
            Ok(found) => {
                for l in &found {
                    let mark = match (l.passed, l.gating) {
                        (true, _) => "PASS",
                        (false, true) => "FAIL",
                        (false, false) => "WARN",
                    };
                    println!("{mark} {}", l.text);
                }
                lines.extend(found);
            }
            Err(e) => {
                crashed = true;
                println!("FAIL {id} error: {e}");
            }
        }
    }
    let failed = lines.iter().filter(|l| l.gating && !l.passed).count();
    println!("acceptance: {} gating failures", failed + usize::from(crashed));
    if failed > 0 || crashed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
