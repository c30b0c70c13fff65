//! Multi-term compact scheme on a rectangle with homogeneous Dirichlet data.
//!
//! Unknowns at one level are stored row-major over the interior nodes, `x`
//! index outer and `y` index inner.

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, Array3};

use crate::error::{Error, Result};
use crate::mesh::{SpatialMesh1D, SpatialMesh2D, TimeMesh};
use crate::solver1d::{solve_modes, Backend, IncrementForm, ModeData, MultiTermSpec, StepHistory};
use crate::toeplitz::{sine_spectrum, SineTransform, TriDiagToeplitz};

type PlaneFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type PlaneTimeFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Problem on `(0, L1) × (0, L2) × (0, T]` with `u = 0` on the boundary.
#[derive(Clone)]
pub struct Problem2D {
    lx: f64,
    ly: f64,
    horizon: f64,
    spec: MultiTermSpec,
    reaction: f64,
    source: PlaneTimeFn,
    initial: PlaneFn,
    velocity: Option<PlaneFn>,
}

impl fmt::Debug for Problem2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem2D")
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .field("horizon", &self.horizon)
            .field("spec", &self.spec)
            .field("reaction", &self.reaction)
            .finish()
    }
}

impl Problem2D {
    pub fn new(lx: f64, ly: f64, horizon: f64, spec: MultiTermSpec) -> Result<Self> {
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Config(format!("rectangle {lx} x {ly} must have positive sides")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Config(format!("horizon {horizon} must be positive")));
        }
        let zero: PlaneFn = Arc::new(|_, _| 0.0);
        let velocity = spec.has_wave().then(|| zero.clone());
        Ok(Self {
            lx,
            ly,
            horizon,
            spec,
            reaction: 0.0,
            source: Arc::new(|_, _, _| 0.0),
            initial: zero,
            velocity,
        })
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_initial(mut self, phi0: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.initial = Arc::new(phi0);
        self
    }

    pub fn with_velocity(mut self, phi1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.velocity = Some(Arc::new(phi1));
        self
    }

    pub fn without_velocity(mut self) -> Self {
        self.velocity = None;
        self
    }

    /// Adds `+c u` to the left-hand side.
    pub fn with_reaction(mut self, c: f64) -> Self {
        self.reaction = c;
        self
    }

    pub fn spec(&self) -> &MultiTermSpec {
        &self.spec
    }

    pub fn reaction(&self) -> f64 {
        self.reaction
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn source(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.source)(x, y, t)
    }

    pub fn initial(&self, x: f64, y: f64) -> f64 {
        (self.initial)(x, y)
    }

    pub fn velocity(&self, x: f64, y: f64) -> f64 {
        self.velocity.as_ref().map_or(0.0, |v| v(x, y))
    }

    pub fn validate(&self, time: &TimeMesh, space: &SpatialMesh2D) -> Result<()> {
        if self.spec.has_wave() && self.velocity.is_none() {
            return Err(Error::Config("orders above 1 need an initial velocity u_t(x, y, 0)".into()));
        }
        if !self.reaction.is_finite() || self.reaction < 0.0 {
            return Err(Error::Config(format!("reaction coefficient {} must be >= 0", self.reaction)));
        }
        if (time.horizon() - self.horizon).abs() > 1e-12 * self.horizon {
            return Err(Error::Config("time mesh and problem horizon differ".into()));
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b;
        if !close(space.x.length(), self.lx) || !close(space.y.length(), self.ly) {
            return Err(Error::Config("spatial mesh and rectangle differ".into()));
        }
        // initial data must respect u = 0 on the boundary
        let (mx, my) = (space.x.cells(), space.y.cells());
        let mut edge = Vec::new();
        for i in 0..=mx {
            edge.push((space.x.node(i), 0.0));
            edge.push((space.x.node(i), self.ly));
        }
        for j in 0..=my {
            edge.push((0.0, space.y.node(j)));
            edge.push((self.lx, space.y.node(j)));
        }
        let scale = 1.0
            + (1..mx)
                .flat_map(|i| (1..my).map(move |j| (i, j)))
                .map(|(i, j)| self.initial(space.x.node(i), space.y.node(j)).abs())
                .fold(0.0, f64::max);
        if let Some(&(x, y)) = edge.iter().find(|&&(x, y)| self.initial(x, y).abs() > 1e-10 * scale) {
            return Err(Error::Config(format!(
                "nonzero boundary: initial data is {} at ({x}, {y})",
                self.initial(x, y)
            )));
        }
        Ok(())
    }
}

/// Discrete solution `u_{ij}^n` including boundary nodes, shape `(N+1, M1+1, M2+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField2D {
    values: Array3<f64>,
    tau: f64,
    hx: f64,
    hy: f64,
}

impl GridField2D {
    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn steps(&self) -> usize {
        self.values.dim().0 - 1
    }

    pub fn at(&self, n: usize, i: usize, j: usize) -> f64 {
        self.values[[n, i, j]]
    }

    /// Nodal values at level `n`.
    pub fn level(&self, n: usize) -> Array2<f64> {
        self.values.index_axis(ndarray::Axis(0), n).to_owned()
    }

    /// Max interior nodal error at level `n`.
    pub fn max_error(&self, n: usize, exact: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let (_, mx, my) = self.values.dim();
        let t = n as f64 * self.tau;
        let mut e: f64 = 0.0;
        for i in 1..mx - 1 {
            for j in 1..my - 1 {
                let x = i as f64 * self.hx;
                let y = j as f64 * self.hy;
                e = e.max((exact(x, y, t) - self.values[[n, i, j]]).abs());
            }
        }
        e
    }

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

/// `A_y A_x v` on the interior of a full nodal grid, flattened.
fn average_2d(v: &Array2<f64>, out: &mut [f64]) {
    let (mx, my) = (v.nrows() - 1, v.ncols() - 1);
    let w = [1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0];
    for i in 1..mx {
        for j in 1..my {
            let mut s = 0.0;
            for (di, wi) in w.iter().enumerate() {
                for (dj, wj) in w.iter().enumerate() {
                    s += wi * wj * v[[i + di - 1, j + dj - 1]];
                }
            }
            out[(i - 1) * (my - 1) + (j - 1)] = s;
        }
    }
}

fn sample(space: &SpatialMesh2D, f: impl Fn(f64, f64) -> f64) -> Array2<f64> {
    Array2::from_shape_fn((space.x.cells() + 1, space.y.cells() + 1), |(i, j)| {
        f(space.x.node(i), space.y.node(j))
    })
}

fn interior_initial(problem: &Problem2D, space: &SpatialMesh2D) -> Array2<f64> {
    let (mx, my) = (space.x.cells(), space.y.cells());
    Array2::from_shape_fn((mx + 1, my + 1), |(i, j)| {
        if i == 0 || j == 0 || i == mx || j == my {
            0.0
        } else {
            problem.initial(space.x.node(i), space.y.node(j))
        }
    })
}

/// Double sine transform of one flattened interior level, `y` first.
struct PlaneTransform {
    tx: SineTransform,
    ty: SineTransform,
}

impl PlaneTransform {
    fn new(space: &SpatialMesh2D) -> Result<Self> {
        Ok(Self {
            tx: SineTransform::new(space.x.cells())?,
            ty: SineTransform::new(space.y.cells())?,
        })
    }

    fn apply(&self, level: &mut [f64]) -> Result<()> {
        let (nx, ny) = (self.tx.len(), self.ty.len());
        for row in level.chunks_mut(ny) {
            self.ty.apply_in_place(row)?;
        }
        let mut col = vec![0.0; nx];
        for j in 0..ny {
            for i in 0..nx {
                col[i] = level[i * ny + j];
            }
            self.tx.apply_in_place(&mut col)?;
            for i in 0..nx {
                level[i * ny + j] = col[i];
            }
        }
        Ok(())
    }
}

/// `(λ1 of A, λ2 of S)` for one direction.
fn direction_spectrum(mesh: &SpatialMesh1D) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = sine_spectrum(&TriDiagToeplitz::averaging(mesh.cells())?)?;
    let s = sine_spectrum(&TriDiagToeplitz::stiffness(mesh.cells())?)?;
    Ok((a.eigenvalues().to_vec(), s.eigenvalues().to_vec()))
}

fn assemble_field(
    problem: &Problem2D,
    time: &TimeMesh,
    space: &SpatialMesh2D,
    interior: &Array2<f64>,
) -> GridField2D {
    let (mx, my) = (space.x.cells(), space.y.cells());
    let steps = time.steps();
    let mut values = Array3::zeros((steps + 1, mx + 1, my + 1));
    let u0 = interior_initial(problem, space);
    values.index_axis_mut(ndarray::Axis(0), 0).assign(&u0);
    for n in 1..=steps {
        for i in 1..mx {
            for j in 1..my {
                values[[n, i, j]] = interior[[n - 1, (i - 1) * (my - 1) + (j - 1)]];
            }
        }
    }
    GridField2D { values, tau: time.tau(), hx: space.x.h(), hy: space.y.h() }
}

/// All levels at once: double sine transform, then one bordered Toeplitz
/// solve per mode pair.
pub fn solve_2d_fast(problem: &Problem2D, time: &TimeMesh, space: &SpatialMesh2D) -> Result<GridField2D> {
    problem.validate(time, space)?;
    let steps = time.steps();
    let (mx, my) = (space.x.cells(), space.y.cells());
    let points = (mx - 1) * (my - 1);
    let form = IncrementForm::new(problem.spec(), problem.reaction(), time)?;

    let mut b = Array2::zeros((steps, points));
    let mut avg_f = vec![0.0; points];
    for n in 1..=steps {
        let t = time.time(n);
        average_2d(&sample(space, |x, y| problem.source(x, y, t)), &mut avg_f);
        for (out, &v) in b.row_mut(n - 1).iter_mut().zip(&avg_f) {
            *out = form.scale * v;
        }
    }

    let plane = PlaneTransform::new(space)?;
    let interior_of = |grid: &Array2<f64>| -> Vec<f64> {
        (1..mx).flat_map(|i| (1..my).map(move |j| (i, j))).map(|(i, j)| grid[[i, j]]).collect()
    };
    let mut initial = interior_of(&interior_initial(problem, space));
    plane.apply(&mut initial)?;
    let mut velocity = interior_of(&sample(space, |x, y| problem.velocity(x, y)));
    plane.apply(&mut velocity)?;

    let (l1x, l2x) = direction_spectrum(&space.x)?;
    let (l1y, l2y) = direction_spectrum(&space.y)?;
    let (hx2, hy2) = (space.x.h().powi(2), space.y.h().powi(2));
    let mut shifts = Vec::with_capacity(points);
    let mut divisors = Vec::with_capacity(points);
    for i in 0..mx - 1 {
        for j in 0..my - 1 {
            let symbol = l2x[i] / l1x[i] / hx2 + l2y[j] / l1y[j] / hy2;
            shifts.push(form.reaction + form.scale * symbol);
            divisors.push(l1x[i] * l1y[j]);
        }
    }

    let transform = |b: &mut Array2<f64>| -> Result<()> {
        use rayon::prelude::*;
        b.as_slice_mut()
            .ok_or_else(|| Error::Config("level data must be contiguous".into()))?
            .par_chunks_mut(points)
            .try_for_each(|level| plane.apply(level))
    };
    transform(&mut b)?;
    let modes = ModeData { shifts: &shifts, divisors: &divisors, initial: &initial, velocity: &velocity };
    solve_modes(&form, &modes, &mut b)?;
    transform(&mut b)?;
    Ok(assemble_field(problem, time, space, &b))
}

/// Time marching with full history sums; each level's elliptic problem is
/// solved in sine-mode space.
pub fn solve_2d_stepping(problem: &Problem2D, time: &TimeMesh, space: &SpatialMesh2D) -> Result<GridField2D> {
    problem.validate(time, space)?;
    let steps = time.steps();
    let (mx, my) = (space.x.cells(), space.y.cells());
    let points = (mx - 1) * (my - 1);
    let hist = StepHistory::new(problem.spec(), time)?;
    let c = problem.reaction();

    let plane = PlaneTransform::new(space)?;
    let (l1x, l2x) = direction_spectrum(&space.x)?;
    let (l1y, l2y) = direction_spectrum(&space.y)?;
    let (hx2, hy2) = (space.x.h().powi(2), space.y.h().powi(2));

    let full = (mx + 1) * (my + 1);
    let mut levels = Array2::zeros((steps + 1, full));
    let u0 = interior_initial(problem, space);
    levels.row_mut(0).assign(&ndarray::ArrayView1::from(u0.as_slice().expect("standard layout")));
    let phi1 = sample(space, |x, y| problem.velocity(x, y));
    let mut h = vec![0.0; full];
    let mut rhs = vec![0.0; points];
    for n in 1..=steps {
        let t = time.time(n);
        let a = hist.kappa(n) + c;
        let vel = hist.velocity_weight(n);
        hist.history(n, &levels, &mut h);
        let f = sample(space, |x, y| problem.source(x, y, t));
        let w = Array2::from_shape_fn((mx + 1, my + 1), |(i, j)| {
            f[[i, j]] + vel * phi1[[i, j]] - h[i * (my + 1) + j]
        });
        average_2d(&w, &mut rhs);
        plane.apply(&mut rhs)?;
        for i in 0..mx - 1 {
            for j in 0..my - 1 {
                let symbol = a * l1x[i] * l1y[j] + l1y[j] * l2x[i] / hx2 + l1x[i] * l2y[j] / hy2;
                rhs[i * (my - 1) + j] /= symbol;
            }
        }
        plane.apply(&mut rhs)?;
        let mut row = levels.row_mut(n);
        for i in 1..mx {
            for j in 1..my {
                row[i * (my + 1) + j] = rhs[(i - 1) * (my - 1) + (j - 1)];
            }
        }
    }
    let interior = Array2::from_shape_fn((steps, points), |(n, p)| {
        let (i, j) = (p / (my - 1) + 1, p % (my - 1) + 1);
        levels[[n + 1, i * (my + 1) + j]]
    });
    Ok(assemble_field(problem, time, space, &interior))
}

pub fn solve_2d(
    problem: &Problem2D,
    time: &TimeMesh,
    space: &SpatialMesh2D,
    backend: Backend,
) -> Result<GridField2D> {
    match backend {
        Backend::Stepping => solve_2d_stepping(problem, time, space),
        Backend::Fast => solve_2d_fast(problem, time, space),
    }
}

