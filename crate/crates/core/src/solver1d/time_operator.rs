//! The all-at-once time matrix and right-hand side.
//!
//! Multiplying the scheme by `τ^{β*}` (β* the largest order) turns the time
//! discretization of every level `n = 1..N` into one lower-triangular matrix
//! that is Toeplitz apart from its first column:
//!
//! ```text
//! Σ_k T_{n,k} A u^k + r A u^n + μ S u^n = b^n,   r = c τ^{β*}, μ = τ^{β*}/h²
//! ```
//!
//! where `S = tridiag(-1, 2, -1)`. Level-0 contributions and the initial
//! velocity move into `b`.

use ndarray::Array2;

use crate::error::{check_len, Result};
use crate::kernels::{l1_coefficients, l2_coefficients};
use crate::mesh::{SpatialMesh1D, TimeMesh};
use crate::special::KahanSum;
use crate::spatial::average_into;
use crate::toeplitz::{toeplitz_matvec, RampedBorderedToeplitz};

use super::{frame, MultiTermSpec, Problem1D};

/// Bordered lower-triangular Toeplitz time matrix plus the level-0 weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeOperator {
    tau: f64,
    scale: f64,
    lead: Vec<f64>,
    generator: Vec<f64>,
    initial: Vec<f64>,
    velocity: Vec<f64>,
    reaction: f64,
}

impl TimeOperator {
    pub fn new(spec: &MultiTermSpec, reaction: f64, time: &TimeMesh) -> Result<Self> {
        let n = time.steps();
        let tau = time.tau();
        let top = spec.scaling_order();
        let scale = tau.powf(top);
        let mut lead = vec![0.0; n];
        let mut generator = vec![0.0; n];
        let mut initial = vec![0.0; n];
        let mut velocity = vec![0.0; n];
        for term in spec.sub_terms() {
            let s = term.weight * tau.powf(top - term.order.value());
            let a = l1_coefficients(term.order, n)?;
            for m in 0..n {
                let g = s * (a[m] - a.get(m as isize - 1));
                generator[m] += g;
                lead[m] += g;
                initial[m] += s * a[m];
            }
        }
        for term in spec.wave_terms() {
            let s = term.weight * tau.powf(top - term.order.value());
            let b = l2_coefficients(term.order, n)?;
            for m in 0..n {
                let (b0, b1, b2) = (b[m], b.get(m as isize - 1), b.get(m as isize - 2));
                generator[m] += s * (b0 - 2.0 * b1 + b2);
                lead[m] += s * (2.0 * b0 - 2.0 * b1 + b2);
                initial[m] += s * (2.0 * b0 - b1);
                velocity[m] += 2.0 * s * tau * b0;
            }
        }
        Ok(Self {
            tau,
            scale,
            lead,
            generator,
            initial,
            velocity,
            reaction: reaction * scale,
        })
    }

    pub fn steps(&self) -> usize {
        self.lead.len()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `τ^{β*}`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// First column of the time matrix.
    pub fn lead(&self) -> &[f64] {
        &self.lead
    }

    /// Generator of the Toeplitz part (columns 2..N).
    pub fn generator(&self) -> &[f64] {
        &self.generator
    }

    /// Weight of `A u^0` in row `n` sits at index `n - 1`.
    pub fn initial_weights(&self) -> &[f64] {
        &self.initial
    }

    /// Weight of `A φ1` in row `n` sits at index `n - 1`.
    pub fn velocity_weights(&self) -> &[f64] {
        &self.velocity
    }

    /// `c τ^{β*}`.
    pub fn reaction(&self) -> f64 {
        self.reaction
    }

    /// `μ = τ^{β*} / h²`.
    pub fn stiffness(&self, h: f64) -> f64 {
        self.scale / (h * h)
    }

    /// `(T v)_n` for a series `v^1..v^N`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.steps(), v.len())?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        let mut row = vec![0.0; v.len()];
        row[0] = self.generator[0];
        let mut y = toeplitz_matvec(&self.generator, &row, v)?;
        for (yn, (l, g)) in y.iter_mut().zip(self.lead.iter().zip(&self.generator)) {
            *yn += (l - g) * v[0];
        }
        Ok(y)
    }
}

/// The time matrix rewritten for second increments
///
/// ```text
/// y^1 = u^1 - u^0 - τ φ1,   y^n = u^n - 2u^{n-1} + u^{n-2}  (n >= 2).
/// ```
///
/// For smooth solutions `y = O(τ²)` while `T u` is a small difference of
/// `O(1)` terms, so products with `T` lose about `N²ε` relative accuracy at
/// large `N`. In the new unknowns every weight is positive: `τ^{β*}` times a
/// wave term contributes `s b_m`, a sub-diffusive term `s (a_0 + .. + a_m)`
/// and a mode shift `σ` becomes `σ (m + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct IncrementForm {
    pub(crate) tau: f64,
    pub(crate) scale: f64,
    pub(crate) reaction: f64,
    pub(crate) lead: Vec<f64>,
    pub(crate) generator: Vec<f64>,
    /// Weight of `φ1` moved to the right-hand side at level `n`, index `n - 1`.
    pub(crate) velocity: Vec<f64>,
}

impl IncrementForm {
    pub(crate) fn new(spec: &MultiTermSpec, reaction: f64, time: &TimeMesh) -> Result<Self> {
        let n = time.steps();
        let tau = time.tau();
        let top = spec.scaling_order();
        let scale = tau.powf(top);
        let mut lead = vec![0.0; n];
        let mut generator = vec![0.0; n];
        let mut velocity = vec![0.0; n];
        for term in spec.sub_terms() {
            let s = term.weight * tau.powf(top - term.order.value());
            let a = l1_coefficients(term.order, n)?;
            let mut partial = KahanSum::new();
            for m in 0..n {
                partial.add(a[m]);
                let g = s * partial.value();
                generator[m] += g;
                lead[m] += g;
                velocity[m] += tau * g;
            }
        }
        for term in spec.wave_terms() {
            let s = term.weight * tau.powf(top - term.order.value());
            let b = l2_coefficients(term.order, n)?;
            for m in 0..n {
                generator[m] += s * b[m];
                lead[m] += 2.0 * s * b[m];
            }
        }
        Ok(Self { tau, scale, reaction: reaction * scale, lead, generator, velocity })
    }

    /// `μ = τ^{β*} / h²`.
    pub(crate) fn stiffness(&self, h: f64) -> f64 {
        self.scale / (h * h)
    }

    /// Turns one mode's right-hand side `rhs^n = ĝ^n` (scaled source divided
    /// by the averaging eigenvalue) into the mode solution `û^1..û^N`.
    pub(crate) fn solve_mode(
        &self,
        system: &RampedBorderedToeplitz,
        shift: f64,
        u0: f64,
        phi1: f64,
        col: &mut [f64],
    ) -> Result<()> {
        for (n, (v, vel)) in col.iter_mut().zip(&self.velocity).enumerate() {
            let level = (n + 1) as f64;
            *v -= shift * (u0 + level * self.tau * phi1) + vel * phi1;
        }
        system.solve(shift, col)?;
        // y -> w = u^n - u^{n-1} -> u
        let mut w = KahanSum::new();
        w.add(self.tau * phi1);
        let mut u = KahanSum::new();
        u.add(u0);
        for v in col.iter_mut() {
            w.add(*v);
            u.add(w.value());
            *v = u.value();
        }
        Ok(())
    }
}

/// Right-hand side `b` of the all-at-once system, one row per level `n = 1..N`
/// and one column per interior node.
pub fn assemble_rhs(problem: &Problem1D, time: &TimeMesh, space: &SpatialMesh1D) -> Result<Array2<f64>> {
    problem.validate(time, space)?;
    let op = TimeOperator::new(problem.spec(), problem.reaction(), time)?;
    assemble_with(problem, &op, time, space)
}

pub(crate) fn assemble_with(
    problem: &Problem1D,
    op: &TimeOperator,
    time: &TimeMesh,
    space: &SpatialMesh1D,
) -> Result<Array2<f64>> {
    let steps = time.steps();
    let m = space.cells();
    let nodes: Vec<f64> = space.nodes().collect();
    let u0 = frame(problem, time, space).row(0).to_vec();
    let mut avg_u0 = vec![0.0; m + 1];
    average_into(&u0, &mut avg_u0);
    let phi1: Vec<f64> = nodes.iter().map(|&x| problem.velocity(x)).collect();
    let mut avg_phi1 = vec![0.0; m + 1];
    average_into(&phi1, &mut avg_phi1);

    let mut b = Array2::zeros((steps, m - 1));
    let mut f = vec![0.0; m + 1];
    let mut avg_f = vec![0.0; m + 1];
    for n in 1..=steps {
        let t = time.time(n);
        for (fi, &x) in f.iter_mut().zip(&nodes) {
            *fi = problem.source(x, t);
        }
        average_into(&f, &mut avg_f);
        let (iota, nu) = (op.initial[n - 1], op.velocity[n - 1]);
        for i in 1..m {
            b[[n - 1, i - 1]] = op.scale * avg_f[i] + nu * avg_phi1[i] + iota * avg_u0[i];
        }
    }

    if problem.has_boundary_data() {
        let mu = op.stiffness(space.h());
        for (side, col) in [(0usize, 0usize), (1, m - 2)] {
            let g: Vec<f64> = (1..=steps)
                .map(|n| {
                    let (l, r) = problem.boundary(time.time(n));
                    if side == 0 { l } else { r }
                })
                .collect();
            let tg = op.apply(&g)?;
            for n in 0..steps {
                b[[n, col]] += mu * g[n] - (tg[n] + op.reaction * g[n]) / 12.0;
            }
        }
    }
    Ok(b)
}
