//! Level-by-level time marching with explicit history sums.

use ndarray::Array2;

use crate::error::Result;
use crate::kernels::{l1_coefficients, l2_coefficients, CoefficientTable};
use crate::mesh::{SpatialMesh1D, TimeMesh};
use crate::spatial::{average_into, solve_tridiagonal_constant};

use super::{frame, GridField1D, MultiTermSpec, Problem1D};

/// Splits `Σ_j K_j D_τ^{γ_j} u^n` into `κ_n u^n + H^n`, where `H^n` only
/// involves earlier levels.
///
/// The sums use difference form: first differences for L1 terms, second
/// differences for L2 terms.
#[derive(Debug, Clone)]
pub(crate) struct StepHistory {
    tau: f64,
    sub: Vec<(f64, CoefficientTable)>,
    wave: Vec<(f64, CoefficientTable)>,
}

impl StepHistory {
    pub(crate) fn new(spec: &MultiTermSpec, time: &TimeMesh) -> Result<Self> {
        let tau = time.tau();
        let n = time.steps();
        let sub = spec
            .sub_terms()
            .map(|t| Ok((t.weight * tau.powf(-t.order.value()), l1_coefficients(t.order, n)?)))
            .collect::<Result<Vec<_>>>()?;
        let wave = spec
            .wave_terms()
            .map(|t| Ok((t.weight * tau.powf(-t.order.value()), l2_coefficients(t.order, n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { tau, sub, wave })
    }

    /// Coefficient of `u^n` at level `n`.
    pub(crate) fn kappa(&self, n: usize) -> f64 {
        let s: f64 = self.sub.iter().map(|(s, a)| s * a[0]).sum();
        let w: f64 = self.wave.iter().map(|(s, b)| s * b[0]).sum();
        s + if n == 1 { 2.0 * w } else { w }
    }

    /// Weight of `φ1` in the level-`n` right-hand side.
    pub(crate) fn velocity_weight(&self, n: usize) -> f64 {
        self.wave.iter().map(|(s, b)| 2.0 * s * self.tau * b[n - 1]).sum()
    }

    /// `H^n` at every point; `levels` holds `u^0..u^{n-1}` in its first rows.
    pub(crate) fn history(&self, n: usize, levels: &Array2<f64>, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let row = |k: usize| levels.row(k);
        for k in 1..n {
            let c1: f64 = self.sub.iter().map(|(s, a)| s * a[n - k]).sum();
            let (cur, prev) = (row(k), row(k - 1));
            if k >= 2 {
                let c2: f64 = self.wave.iter().map(|(s, b)| s * b[n - k]).sum();
                let prev2 = row(k - 2);
                for (p, o) in out.iter_mut().enumerate() {
                    *o += c1 * (cur[p] - prev[p]) + c2 * (cur[p] - 2.0 * prev[p] + prev2[p]);
                }
            } else {
                for (p, o) in out.iter_mut().enumerate() {
                    *o += c1 * (cur[p] - prev[p]);
                }
            }
        }
        let sub0: f64 = self.sub.iter().map(|(s, a)| s * a[0]).sum();
        let last = row(n - 1);
        for (o, &v) in out.iter_mut().zip(last.iter()) {
            *o -= sub0 * v;
        }
        if self.wave.is_empty() {
            return;
        }
        let wave0: f64 = self.wave.iter().map(|(s, b)| s * b[0]).sum();
        if n == 1 {
            for (o, &v) in out.iter_mut().zip(row(0).iter()) {
                *o -= 2.0 * wave0 * v;
            }
        } else {
            let start: f64 = self.wave.iter().map(|(s, b)| 2.0 * s * b[n - 1]).sum();
            let (u1, u0, before) = (row(1), row(0), row(n - 2));
            for (p, o) in out.iter_mut().enumerate() {
                *o += wave0 * (before[p] - 2.0 * last[p]) + start * (u1[p] - u0[p]);
            }
        }
    }
}

/// Marches `n = 1..N`, one tridiagonal solve per level.
///
/// Handles inhomogeneous Dirichlet data.
pub fn solve_stepping(problem: &Problem1D, time: &TimeMesh, space: &SpatialMesh1D) -> Result<GridField1D> {
    problem.validate(time, space)?;
    let steps = time.steps();
    let m = space.cells();
    let h2 = space.h() * space.h();
    let c = problem.reaction();
    let nodes: Vec<f64> = space.nodes().collect();
    let phi1: Vec<f64> = nodes.iter().map(|&x| problem.velocity(x)).collect();
    let hist = StepHistory::new(problem.spec(), time)?;

    let mut u = frame(problem, time, space);
    let mut h = vec![0.0; m + 1];
    let mut w = vec![0.0; m + 1];
    let mut aw = vec![0.0; m + 1];
    let mut scratch = Vec::new();
    for n in 1..=steps {
        let t = time.time(n);
        let a = hist.kappa(n) + c;
        let vel = hist.velocity_weight(n);
        hist.history(n, &u, &mut h);
        for i in 0..=m {
            w[i] = problem.source(nodes[i], t) + vel * phi1[i] - h[i];
        }
        average_into(&w, &mut aw);
        let off = a / 12.0 - 1.0 / h2;
        let diag = a * 10.0 / 12.0 + 2.0 / h2;
        let rhs = &mut aw[1..m];
        rhs[0] -= off * u[[n, 0]];
        rhs[m - 2] -= off * u[[n, m]];
        solve_tridiagonal_constant(off, diag, off, rhs, &mut scratch)?;
        for i in 1..m {
            u[[n, i]] = aw[i];
        }
    }
    Ok(GridField1D::new(u, time.tau(), space.h()))
}
