//! Distributed-order equations `∫_a^b w(γ) D_t^γ u dγ = u_xx + f`, reduced
//! to multi-term form by the composite midpoint rule.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::FractionalOrder;
use crate::mesh::{SpatialMesh1D, TimeMesh};
use crate::solver1d::{solve, Backend, GridField1D, MultiTermSpec, Problem1D, Term};

/// Weight `w(γ)` on `[a, b] ⊂ [0, 2]` split into `2J` cells.
///
/// On the default range `[0, 2]` the cell width is `σ = 1/J`.
#[derive(Clone)]
pub struct DistributionSpec {
    weight: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    intervals: usize,
    lower: f64,
    upper: f64,
}

impl fmt::Debug for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionSpec")
            .field("intervals", &self.intervals)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish()
    }
}

impl DistributionSpec {
    pub fn new(weight: impl Fn(f64) -> f64 + Send + Sync + 'static, intervals: usize) -> Result<Self> {
        Self::on_range(weight, intervals, 0.0, 2.0)
    }

    pub fn on_range(
        weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        intervals: usize,
        lower: f64,
        upper: f64,
    ) -> Result<Self> {
        if intervals == 0 {
            return Err(Error::Domain("distribution needs J >= 1".into()));
        }
        if !(0.0 <= lower && lower < upper && upper <= 2.0) {
            return Err(Error::Domain(format!(
                "order range [{lower}, {upper}] must satisfy 0 <= a < b <= 2"
            )));
        }
        Ok(Self { weight: Arc::new(weight), intervals, lower, upper })
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of quadrature cells, `2J`.
    pub fn cells(&self) -> usize {
        2 * self.intervals
    }

    /// Cell width.
    pub fn sigma(&self) -> f64 {
        (self.upper - self.lower) / self.cells() as f64
    }

    pub fn weight(&self, order: f64) -> f64 {
        (self.weight)(order)
    }

    /// Midpoints `a + (j - 1/2) σ`, `j = 1..2J`.
    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let sigma = self.sigma();
        (1..=self.cells()).map(move |j| self.lower + (j as f64 - 0.5) * sigma)
    }
}

/// One term per cell with weight `σ w(γ_j)` at the midpoint `γ_j`.
pub fn discretize_distribution(d: &DistributionSpec) -> Result<MultiTermSpec> {
    let sigma = d.sigma();
    let terms = d
        .midpoints()
        .map(|order| {
            let w = d.weight(order);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Domain(format!("weight w({order}) = {w} is not positive")));
            }
            Ok(Term { weight: sigma * w, order: FractionalOrder::new(order)? })
        })
        .collect::<Result<Vec<_>>>()?;
    MultiTermSpec::new(terms)
}

/// Solves `shell` with its fractional terms replaced by the quadrature of `d`.
pub fn solve_distributed(
    d: &DistributionSpec,
    shell: &Problem1D,
    time: &TimeMesh,
    space: &SpatialMesh1D,
    backend: Backend,
) -> Result<GridField1D> {
    let spec = discretize_distribution(d)?;
    solve(&shell.clone().with_spec(spec), time, space, backend)
}
