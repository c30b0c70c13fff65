//! Problems with known exact solutions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distributed::DistributionSpec;
use crate::error::{Error, Result};
use crate::kernels::{caputo_monomial, FractionalOrder};
use crate::solver1d::{MultiTermSpec, Problem1D};
use crate::solver2d::Problem2D;
use crate::special::gamma;

/// Exact `u(x, t)`.
pub type Exact1D = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Exact `u(x, y, t)`.
pub type Exact2D = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Built-in test cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum Example {
    /// `D^{α1}u + D^{α2}u + u = u_xx + f` on `(0, π) × (0, 1]`,
    /// `u = sin x (t³ + t + 1)`.
    Ex1 { alpha1: f64, alpha2: f64 },
    /// `∫_0^2 Γ(4-α) D^α u dα = u_xx + f` on `(0, π) × (0, 1]`, `u = sin x t³`,
    /// with `J` midpoint cells per unit order.
    Ex2 { intervals: usize },
    /// `D^{α1}u + D^{α2}u = Δu + f` on `(0, π)² × (0, 1/2]`,
    /// `u = sin x sin y (t³ + t + 1)`.
    Ex3 { alpha1: f64, alpha2: f64 },
    /// Same equation as `Ex1` with `u = sin x t^ν`.
    LowReg { nu: f64, alpha1: f64, alpha2: f64 },
    /// `D^ν u = u_xx + f` with `u = sin x t^ν`: a single wave term whose order
    /// matches the time exponent and no reaction.
    LowRegWave { nu: f64 },
}

impl Example {
    /// Parses `ex1`, `ex2`, `ex3`, `low_reg` or `low_reg_wave` with the given parameters.
    pub fn from_id(id: &str, alpha1: f64, alpha2: f64, nu: f64, intervals: usize) -> Result<Self> {
        match id {
            "ex1" => Ok(Self::Ex1 { alpha1, alpha2 }),
            "ex2" => Ok(Self::Ex2 { intervals }),
            "ex3" => Ok(Self::Ex3 { alpha1, alpha2 }),
            "low_reg" | "lowreg" => Ok(Self::LowReg { nu, alpha1, alpha2 }),
            "low_reg_wave" => Ok(Self::LowRegWave { nu }),
            other => Err(Error::Config(format!("unknown example `{other}`"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::Ex1 { .. } => "ex1",
            Self::Ex2 { .. } => "ex2",
            Self::Ex3 { .. } => "ex3",
            Self::LowReg { .. } => "low_reg",
            Self::LowRegWave { .. } => "low_reg_wave",
        }
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, Self::Ex3 { .. })
    }

    /// Same example with a different number of quadrature cells.
    pub fn with_intervals(self, intervals: usize) -> Self {
        match self {
            Self::Ex2 { .. } => Self::Ex2 { intervals },
            other => other,
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ex1 { alpha1, alpha2 } => write!(f, "ex1(alpha1={alpha1}, alpha2={alpha2})"),
            Self::Ex2 { intervals } => write!(f, "ex2(J={intervals})"),
            Self::Ex3 { alpha1, alpha2 } => write!(f, "ex3(alpha1={alpha1}, alpha2={alpha2})"),
            Self::LowReg { nu, alpha1, alpha2 } => {
                write!(f, "low_reg(nu={nu}, alpha1={alpha1}, alpha2={alpha2})")
            }
            Self::LowRegWave { nu } => write!(f, "low_reg_wave(nu={nu})"),
        }
    }
}

/// A problem together with its exact solution.
#[derive(Clone)]
pub enum Manufactured {
    OneD { problem: Problem1D, exact: Exact1D },
    Distributed { distribution: DistributionSpec, shell: Problem1D, exact: Exact1D },
    TwoD { problem: Problem2D, exact: Exact2D },
}

impl fmt::Debug for Manufactured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneD { problem, .. } => f.debug_tuple("OneD").field(problem).finish(),
            Self::Distributed { distribution, shell, .. } => {
                f.debug_tuple("Distributed").field(distribution).field(shell).finish()
            }
            Self::TwoD { problem, .. } => f.debug_tuple("TwoD").field(problem).finish(),
        }
    }
}

impl Manufactured {
    pub fn horizon(&self) -> f64 {
        match self {
            Self::OneD { problem, .. } => problem.horizon(),
            Self::Distributed { shell, .. } => shell.horizon(),
            Self::TwoD { problem, .. } => problem.horizon(),
        }
    }
}

/// `c_p t^{p-γ}` with `c_p = Γ(p+1)/Γ(p+1-γ)` precomputed.
#[derive(Debug, Clone, Copy)]
struct CaputoPower {
    coefficient: f64,
    exponent: f64,
}

impl CaputoPower {
    fn new(p: f64, order: FractionalOrder) -> Result<Self> {
        Ok(Self {
            coefficient: caputo_monomial(p, order, 1.0)?,
            exponent: p - order.value(),
        })
    }

    fn at(&self, t: f64) -> f64 {
        if self.coefficient == 0.0 {
            0.0
        } else {
            self.coefficient * t.powf(self.exponent)
        }
    }
}

/// `Σ_j D^{γ_j}` of `Σ_p t^p` for the given powers.
fn caputo_sum(orders: &[f64], powers: &[f64]) -> Result<impl Fn(f64) -> f64 + Send + Sync + 'static> {
    let mut parts = Vec::new();
    for &o in orders {
        let order = FractionalOrder::new(o)?;
        for &p in powers {
            parts.push(CaputoPower::new(p, order)?);
        }
    }
    Ok(move |t: f64| parts.iter().map(|c| c.at(t)).sum::<f64>())
}

/// `6t (t² - 1) / ln t`, with the removable singularity at `t = 1` filled in.
pub fn distributed_cubic_source(t: f64) -> f64 {
    let l = t.ln();
    if l.abs() < 1e-300 {
        12.0
    } else {
        6.0 * t * (2.0 * l).exp_m1() / l
    }
}

pub fn manufactured_problem(example: &Example) -> Result<Manufactured> {
    match *example {
        Example::Ex1 { alpha1, alpha2 } => {
            let spec = MultiTermSpec::unit(&[alpha1, alpha2])?;
            let d = caputo_sum(&[alpha1, alpha2], &[3.0, 1.0])?;
            let g = |t: f64| t * t * t + t + 1.0;
            let problem = Problem1D::new(PI, 1.0, spec)?
                .with_reaction(1.0)
                .with_source(move |x, t| x.sin() * (d(t) + 2.0 * g(t)))
                .with_initial(f64::sin)
                .with_velocity(f64::sin);
            Ok(Manufactured::OneD { problem, exact: Arc::new(move |x, t| x.sin() * g(t)) })
        }
        Example::LowReg { nu, alpha1, alpha2 } => {
            if !(nu > 1.0) {
                return Err(Error::Config(format!("time exponent nu = {nu} must exceed 1")));
            }
            let spec = MultiTermSpec::unit(&[alpha1, alpha2])?;
            let d = caputo_sum(&[alpha1, alpha2], &[nu])?;
            let problem = Problem1D::new(PI, 1.0, spec)?
                .with_reaction(1.0)
                .with_source(move |x, t| x.sin() * (d(t) + 2.0 * t.powf(nu)));
            Ok(Manufactured::OneD { problem, exact: Arc::new(move |x, t| x.sin() * t.powf(nu)) })
        }
        Example::LowRegWave { nu } => {
            if !(nu > 1.0 && nu < 2.0) {
                return Err(Error::Config(format!("time exponent nu = {nu} must lie in (1, 2)")));
            }
            let d = caputo_sum(&[nu], &[nu])?;
            let problem = Problem1D::new(PI, 1.0, MultiTermSpec::unit(&[nu])?)?
                .with_source(move |x, t| x.sin() * (d(t) + t.powf(nu)));
            Ok(Manufactured::OneD { problem, exact: Arc::new(move |x, t| x.sin() * t.powf(nu)) })
        }
        Example::Ex2 { intervals } => {
            let distribution = DistributionSpec::new(|a| gamma(4.0 - a), intervals)?;
            // the shell's own spec is replaced by the quadrature when solving
            let shell = Problem1D::new(PI, 1.0, MultiTermSpec::unit(&[1.5])?)?
                .with_source(|x, t| x.sin() * (t * t * t + distributed_cubic_source(t)));
            Ok(Manufactured::Distributed {
                distribution,
                shell,
                exact: Arc::new(|x, t| x.sin() * t * t * t),
            })
        }
        Example::Ex3 { alpha1, alpha2 } => {
            let spec = MultiTermSpec::unit(&[alpha1, alpha2])?;
            let d = caputo_sum(&[alpha1, alpha2], &[3.0, 1.0])?;
            let g = |t: f64| t * t * t + t + 1.0;
            let problem = Problem2D::new(PI, PI, 0.5, spec)?
                .with_source(move |x, y, t| x.sin() * y.sin() * (d(t) + 2.0 * g(t)))
                .with_initial(|x, y| x.sin() * y.sin())
                .with_velocity(|x, y| x.sin() * y.sin());
            Ok(Manufactured::TwoD {
                problem,
                exact: Arc::new(move |x, y, t| x.sin() * y.sin() * g(t)),
            })
        }
    }
}
