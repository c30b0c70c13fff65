//! Second differences, the compact averaging operator and the three-term
//! elimination used by the implicit steppers.

use crate::error::{check_len, Error, Result};
use crate::mesh::SpatialMesh1D;

pub use crate::mesh::SpatialMesh2D;

/// Nodal values `v_0 .. v_M`.
///
/// Interior node `i` (1-based, `1 <= i <= M-1`) sits at slice index `i - 1`
/// of [`GridFunction1D::interior`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    values: Vec<f64>,
}

impl GridFunction1D {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn sample(mesh: &SpatialMesh1D, f: impl Fn(f64) -> f64) -> Self {
        Self::new(mesh.nodes().map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `(δ_x² v)_i` on the interior; boundary entries are zero.
pub fn apply_delta2(v: &GridFunction1D, mesh: &SpatialMesh1D) -> Result<GridFunction1D> {
    check_len(mesh.cells() + 1, v.len())?;
    let mut out = vec![0.0; v.len()];
    delta2_into(v.values(), mesh.h(), &mut out);
    Ok(GridFunction1D::new(out))
}

/// `A_x v`: `(v_{i-1} + 10 v_i + v_{i+1}) / 12` inside, identity at both ends.
pub fn apply_average(v: &GridFunction1D, mesh: &SpatialMesh1D) -> Result<GridFunction1D> {
    check_len(mesh.cells() + 1, v.len())?;
    let mut out = vec![0.0; v.len()];
    average_into(v.values(), &mut out);
    Ok(GridFunction1D::new(out))
}

pub(crate) fn delta2_into(v: &[f64], h: f64, out: &mut [f64]) {
    let m = v.len() - 1;
    let inv = 1.0 / (h * h);
    out[0] = 0.0;
    out[m] = 0.0;
    for i in 1..m {
        out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * inv;
    }
}

pub(crate) fn average_into(v: &[f64], out: &mut [f64]) {
    let m = v.len() - 1;
    out[0] = v[0];
    out[m] = v[m];
    for i in 1..m {
        out[i] = (v[i - 1] + 10.0 * v[i] + v[i + 1]) / 12.0;
    }
}

/// `max_i |A_x(w'')_i - (δ_x² w)_i|` over interior nodes.
///
/// Decays like `h⁴` for six-times differentiable `w`.
pub fn compact_laplacian_residual(
    w: impl Fn(f64) -> f64,
    w_xx: impl Fn(f64) -> f64,
    mesh: &SpatialMesh1D,
) -> f64 {
    let wv = GridFunction1D::sample(mesh, w);
    let curv = GridFunction1D::sample(mesh, w_xx);
    let mut avg = vec![0.0; wv.len()];
    let mut d2 = vec![0.0; wv.len()];
    average_into(curv.values(), &mut avg);
    delta2_into(wv.values(), mesh.h(), &mut d2);
    (1..mesh.cells())
        .map(|i| (avg[i] - d2[i]).abs())
        .fold(0.0, f64::max)
}

/// Solves a tridiagonal system with constant bands in place.
///
/// Row `i` reads `lower x_{i-1} + diag x_i + upper x_{i+1} = rhs_i`.
/// `scratch` is resized as needed.
pub fn solve_tridiagonal_constant(
    lower: f64,
    diag: f64,
    upper: f64,
    rhs: &mut [f64],
    scratch: &mut Vec<f64>,
) -> Result<()> {
    let n = rhs.len();
    if n == 0 {
        return Ok(());
    }
    scratch.clear();
    scratch.resize(n, 0.0);
    if diag == 0.0 {
        return Err(Error::Singular("zero leading pivot in tridiagonal solve".into()));
    }
    let mut pivot = diag;
    rhs[0] /= pivot;
    for i in 1..n {
        scratch[i] = upper / pivot;
        pivot = diag - lower * scratch[i];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular(format!("vanishing pivot at row {i}")));
        }
        rhs[i] = (rhs[i] - lower * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
    Ok(())
}
