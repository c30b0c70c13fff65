//! Multi-term compact scheme in one space dimension.
//!
//! The equation solved is
//!
//! ```text
//! Σ_j K_j D_t^{γ_j} u + c u = u_xx + f,   0 < x < L, 0 < t <= T,
//! ```
//!
//! with L1 weights for orders `γ <= 1`, corrected L2 weights for `γ > 1`, and
//! the fourth-order compact operator in space. Two backends produce the same
//! discrete solution: [`solve_stepping`] marches in time, [`solve_fast`] solves
//! all time levels at once.

mod fast;
mod stepping;
mod time_operator;

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{FractionalOrder, Regime};
use crate::mesh::{SpatialMesh1D, TimeMesh};

pub use fast::solve_fast;
pub(crate) use fast::{solve_modes, ModeData};
pub use stepping::solve_stepping;
pub(crate) use stepping::StepHistory;
pub(crate) use time_operator::IncrementForm;
pub use time_operator::{assemble_rhs, TimeOperator};

/// Function of space.
pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Function of time.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Function of `(x, t)`.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// One weighted fractional derivative `K D_t^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub order: FractionalOrder,
}

/// Weighted list of fractional orders, ascending and strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTermSpec {
    terms: Vec<Term>,
}

impl MultiTermSpec {
    pub fn new(mut terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Config("at least one fractional term is required".into()));
        }
        if let Some(t) = terms.iter().find(|t| !(t.weight > 0.0 && t.weight.is_finite())) {
            return Err(Error::Config(format!("term weight {} must be positive", t.weight)));
        }
        terms.sort_by(|a, b| a.order.value().total_cmp(&b.order.value()));
        if terms.windows(2).any(|w| w[0].order.value() == w[1].order.value()) {
            return Err(Error::Config("fractional orders must be distinct".into()));
        }
        Ok(Self { terms })
    }

    /// Builds a spec from `(weight, order)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|&(weight, order)| Ok(Term { weight, order: FractionalOrder::new(order)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    /// Unit weights on every order.
    pub fn unit(orders: &[f64]) -> Result<Self> {
        Self::from_pairs(&orders.iter().map(|&o| (1.0, o)).collect::<Vec<_>>())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn sub_terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(|t| t.order.regime() == Regime::Sub)
    }

    pub fn wave_terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(|t| t.order.regime() == Regime::Wave)
    }

    pub fn has_wave(&self) -> bool {
        self.wave_terms().next().is_some()
    }

    /// Largest order; the all-at-once system is scaled by `τ` to this power.
    pub fn scaling_order(&self) -> f64 {
        self.terms.last().map(|t| t.order.value()).unwrap_or(1.0)
    }
}

/// Initial-boundary value problem on `(0, L) × (0, T]`.
///
/// Sources and initial data are sampled at every node, boundary nodes
/// included, so they should be compatible with the Dirichlet data there.
#[derive(Clone)]
pub struct Problem1D {
    length: f64,
    horizon: f64,
    spec: MultiTermSpec,
    reaction: f64,
    source: SpaceTimeFn,
    initial: SpaceFn,
    velocity: Option<SpaceFn>,
    boundary: Option<(TimeFn, TimeFn)>,
}

impl fmt::Debug for Problem1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem1D")
            .field("length", &self.length)
            .field("horizon", &self.horizon)
            .field("spec", &self.spec)
            .field("reaction", &self.reaction)
            .field("velocity", &self.velocity.is_some())
            .field("boundary", &self.boundary.is_some())
            .finish()
    }
}

impl Problem1D {
    /// Zero source, zero initial data, homogeneous boundary.
    pub fn new(length: f64, horizon: f64, spec: MultiTermSpec) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Config(format!("domain length {length} must be positive")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Config(format!("horizon {horizon} must be positive")));
        }
        let zero: SpaceFn = Arc::new(|_| 0.0);
        let velocity = spec.has_wave().then(|| zero.clone());
        Ok(Self {
            length,
            horizon,
            spec,
            reaction: 0.0,
            source: Arc::new(|_, _| 0.0),
            initial: zero,
            velocity,
            boundary: None,
        })
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_initial(mut self, phi0: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.initial = Arc::new(phi0);
        self
    }

    pub fn with_velocity(mut self, phi1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.velocity = Some(Arc::new(phi1));
        self
    }

    /// Drops the initial velocity; wave terms then fail validation.
    pub fn without_velocity(mut self) -> Self {
        self.velocity = None;
        self
    }

    pub fn with_boundary(
        mut self,
        left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.boundary = Some((Arc::new(left), Arc::new(right)));
        self
    }

    /// Adds `+c u` to the left-hand side.
    pub fn with_reaction(mut self, c: f64) -> Self {
        self.reaction = c;
        self
    }

    /// Same data with a different set of fractional terms.
    pub fn with_spec(mut self, spec: MultiTermSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn spec(&self) -> &MultiTermSpec {
        &self.spec
    }

    pub fn reaction(&self) -> f64 {
        self.reaction
    }

    pub fn source(&self, x: f64, t: f64) -> f64 {
        (self.source)(x, t)
    }

    pub fn initial(&self, x: f64) -> f64 {
        (self.initial)(x)
    }

    pub fn velocity(&self, x: f64) -> f64 {
        self.velocity.as_ref().map_or(0.0, |v| v(x))
    }

    pub fn has_velocity(&self) -> bool {
        self.velocity.is_some()
    }

    pub fn has_boundary_data(&self) -> bool {
        self.boundary.is_some()
    }

    /// Dirichlet values `(g0(t), gL(t))`.
    pub fn boundary(&self, t: f64) -> (f64, f64) {
        self.boundary.as_ref().map_or((0.0, 0.0), |(l, r)| (l(t), r(t)))
    }

    /// Checks the problem against a pair of meshes.
    pub fn validate(&self, time: &TimeMesh, space: &SpatialMesh1D) -> Result<()> {
        if self.spec.has_wave() && self.velocity.is_none() {
            return Err(Error::Config(
                "orders above 1 need an initial velocity u_t(x, 0)".into(),
            ));
        }
        if !self.reaction.is_finite() || self.reaction < 0.0 {
            return Err(Error::Config(format!("reaction coefficient {} must be >= 0", self.reaction)));
        }
        if (time.horizon() - self.horizon).abs() > 1e-12 * self.horizon {
            return Err(Error::Config(format!(
                "time mesh ends at {} but the problem horizon is {}",
                time.horizon(),
                self.horizon
            )));
        }
        if (space.length() - self.length).abs() > 1e-12 * self.length {
            return Err(Error::Config(format!(
                "spatial mesh covers {} but the domain length is {}",
                space.length(),
                self.length
            )));
        }
        Ok(())
    }

    /// True when the Dirichlet data vanish at every time level of the mesh.
    pub fn boundary_is_homogeneous(&self, time: &TimeMesh) -> bool {
        self.boundary.is_none()
            || (0..=time.steps()).all(|n| self.boundary(time.time(n)) == (0.0, 0.0))
    }
}

/// Discrete solution `u_i^n` for `0 <= n <= N`, `0 <= i <= M`.
///
/// Row 0 holds the initial data; columns 0 and M hold the boundary values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField1D {
    values: Array2<f64>,
    tau: f64,
    h: f64,
}

impl GridField1D {
    pub(crate) fn new(values: Array2<f64>, tau: f64, h: f64) -> Self {
        Self { values, tau, h }
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn steps(&self) -> usize {
        self.values.nrows() - 1
    }

    pub fn cells(&self) -> usize {
        self.values.ncols() - 1
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn at(&self, n: usize, i: usize) -> f64 {
        self.values[[n, i]]
    }

    /// Nodal values at time level `n`.
    pub fn level(&self, n: usize) -> Vec<f64> {
        self.values.row(n).to_vec()
    }

    /// `max_{1<=i<=M-1} |u(x_i, t_n) - u_i^n|`.
    pub fn max_error(&self, n: usize, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let t = n as f64 * self.tau;
        (1..self.cells())
            .map(|i| (exact(i as f64 * self.h, t) - self.values[[n, i]]).abs())
            .fold(0.0, f64::max)
    }

    /// Discrete L² error on the interior at level `n`.
    pub fn l2_error(&self, n: usize, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let t = n as f64 * self.tau;
        let s: f64 = (1..self.cells())
            .map(|i| (exact(i as f64 * self.h, t) - self.values[[n, i]]).powi(2))
            .sum();
        (self.h * s).sqrt()
    }

    /// `max |u - v|` over every stored value.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Solver backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Time marching with full history sums, `O(N² M)`.
    Stepping,
    /// All-at-once sine-transform / Toeplitz solver, `O(M N log² N)`.
    Fast,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stepping" => Ok(Self::Stepping),
            "fast" => Ok(Self::Fast),
            other => Err(Error::Config(format!("unknown backend `{other}`"))),
        }
    }
}

pub fn solve(
    problem: &Problem1D,
    time: &TimeMesh,
    space: &SpatialMesh1D,
    backend: Backend,
) -> Result<GridField1D> {
    match backend {
        Backend::Stepping => solve_stepping(problem, time, space),
        Backend::Fast => solve_fast(problem, time, space),
    }
}

/// Samples `φ0` at level 0 and the Dirichlet data in the boundary columns.
pub(crate) fn frame(problem: &Problem1D, time: &TimeMesh, space: &SpatialMesh1D) -> Array2<f64> {
    let n = time.steps();
    let m = space.cells();
    let mut u = Array2::zeros((n + 1, m + 1));
    for i in 1..m {
        u[[0, i]] = problem.initial(space.node(i));
    }
    for k in 0..=n {
        let (g0, gl) = problem.boundary(time.time(k));
        u[[k, 0]] = g0;
        u[[k, m]] = gl;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(MultiTermSpec::new(vec![]).is_err());
        assert!(MultiTermSpec::from_pairs(&[(0.0, 0.5)]).is_err());
        assert!(MultiTermSpec::from_pairs(&[(1.0, 0.5), (2.0, 0.5)]).is_err());
        let s = MultiTermSpec::from_pairs(&[(1.0, 1.5), (2.0, 0.5)]).unwrap();
        assert_eq!(s.terms()[0].order.value(), 0.5);
        assert_eq!(s.scaling_order(), 1.5);
        assert_eq!(s.sub_terms().count(), 1);
        assert!(s.has_wave());
    }

    #[test]
    fn missing_velocity_is_a_config_error() {
        let spec = MultiTermSpec::unit(&[0.5, 1.5]).unwrap();
        let p = Problem1D::new(1.0, 1.0, spec).unwrap().without_velocity();
        let t = TimeMesh::new(1.0, 4).unwrap();
        let s = SpatialMesh1D::new(1.0, 4).unwrap();
        assert!(matches!(p.validate(&t, &s), Err(Error::Config(_))));
        assert!(matches!(solve_stepping(&p, &t, &s), Err(Error::Config(_))));
        assert!(matches!(solve_fast(&p, &t, &s), Err(Error::Config(_))));
    }

    #[test]
    fn backend_parses() {
        assert_eq!("fast".parse::<Backend>().unwrap(), Backend::Fast);
        assert!("slow".parse::<Backend>().is_err());
    }
}
