//! All-at-once solver: sine transform in space, bordered triangular Toeplitz
//! solves in time.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{SpatialMesh1D, TimeMesh};
use crate::spatial::average_into;
use crate::toeplitz::{sine_spectrum, RampedBorderedToeplitz, SineTransform, TriDiagToeplitz};

use super::time_operator::IncrementForm;
use super::{frame, GridField1D, Problem1D};

/// Applies `transform` to every row of `data` in place.
pub(crate) fn transform_rows(transform: &SineTransform, data: &mut Array2<f64>) -> Result<()> {
    let cols = data.ncols();
    let slice = data
        .as_slice_mut()
        .ok_or_else(|| Error::Config("row transform needs a contiguous array".into()))?;
    slice.par_chunks_mut(cols.max(1)).try_for_each(|row| transform.apply_in_place(row))
}

/// Modes handed to one worker at a time.
pub(crate) const MODE_BATCH: usize = 64;

/// Per-mode data of an all-at-once solve.
pub(crate) struct ModeData<'a> {
    pub(crate) shifts: &'a [f64],
    pub(crate) divisors: &'a [f64],
    /// Sine coefficients of `u^0` and `φ1`.
    pub(crate) initial: &'a [f64],
    pub(crate) velocity: &'a [f64],
}

/// Solves every mode's time system; column `i` of `data` holds the
/// transformed scaled source of mode `i` on entry and its solution on exit.
pub(crate) fn solve_modes(form: &IncrementForm, modes: &ModeData<'_>, data: &mut Array2<f64>) -> Result<()> {
    let (steps, count) = data.dim();
    let system = RampedBorderedToeplitz::new(form.lead.clone(), &form.generator)?;
    let mut columns: Vec<Vec<f64>> = (0..count).map(|i| data.column(i).to_vec()).collect();
    // few large systems in 1D, many small ones in 2D
    let width = MODE_BATCH.min(count.div_ceil(rayon::current_num_threads())).max(1);
    columns
        .par_chunks_mut(width)
        .enumerate()
        .try_for_each(|(batch, cols)| {
            cols.iter_mut().enumerate().try_for_each(|(k, col)| {
                let i = batch * width + k;
                let d = modes.divisors[i];
                col.iter_mut().for_each(|v| *v /= d);
                form.solve_mode(&system, modes.shifts[i], modes.initial[i], modes.velocity[i], col)
            })
        })?;
    for (i, col) in columns.iter().enumerate() {
        for n in 0..steps {
            data[[n, i]] = col[n];
        }
    }
    Ok(())
}

/// All levels at once in `O(M N log² N + N M log M)` work.
///
/// Requires homogeneous Dirichlet data; use
/// [`solve_stepping`](super::solve_stepping) otherwise.
pub fn solve_fast(problem: &Problem1D, time: &TimeMesh, space: &SpatialMesh1D) -> Result<GridField1D> {
    problem.validate(time, space)?;
    if !problem.boundary_is_homogeneous(time) {
        return Err(Error::Config(
            "the all-at-once solver needs homogeneous Dirichlet data".into(),
        ));
    }
    let m = space.cells();
    let form = IncrementForm::new(problem.spec(), problem.reaction(), time)?;
    let nodes: Vec<f64> = space.nodes().collect();

    let mut b = Array2::zeros((time.steps(), m - 1));
    let mut f = vec![0.0; m + 1];
    let mut avg_f = vec![0.0; m + 1];
    for n in 1..=time.steps() {
        let t = time.time(n);
        for (fi, &x) in f.iter_mut().zip(&nodes) {
            *fi = problem.source(x, t);
        }
        average_into(&f, &mut avg_f);
        for i in 1..m {
            b[[n - 1, i - 1]] = form.scale * avg_f[i];
        }
    }

    let transform = SineTransform::new(m)?;
    let avg = sine_spectrum(&TriDiagToeplitz::averaging(m)?)?;
    let stiff = sine_spectrum(&TriDiagToeplitz::stiffness(m)?)?;
    let mu = form.stiffness(space.h());
    let shifts: Vec<f64> = avg
        .eigenvalues()
        .iter()
        .zip(stiff.eigenvalues())
        .map(|(l1, l2)| form.reaction + mu * l2 / l1)
        .collect();
    let initial = transform.apply(&nodes[1..m].iter().map(|&x| problem.initial(x)).collect::<Vec<_>>())?;
    let velocity = transform.apply(&nodes[1..m].iter().map(|&x| problem.velocity(x)).collect::<Vec<_>>())?;

    transform_rows(&transform, &mut b)?;
    let modes = ModeData { shifts: &shifts, divisors: avg.eigenvalues(), initial: &initial, velocity: &velocity };
    solve_modes(&form, &modes, &mut b)?;
    transform_rows(&transform, &mut b)?;

    let mut u = frame(problem, time, space);
    for n in 1..=time.steps() {
        for i in 1..m {
            u[[n, i]] = b[[n - 1, i - 1]];
        }
    }
    Ok(GridField1D::new(u, time.tau(), space.h()))
}
