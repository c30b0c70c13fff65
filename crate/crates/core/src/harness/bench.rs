//! Wall-clock scaling of the two backends under time refinement.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{SpatialMesh1D, TimeMesh};
use crate::solver1d::{solve, Backend};

use super::manufactured::{manufactured_problem, Example, Manufactured};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub steps: usize,
    pub seconds: f64,
    /// Time relative to the previous row.
    pub ratio: Option<f64>,
}

/// Times one solve of the first example per `N`, with `M` cells fixed.
pub fn run_bench(backend: Backend, steps: &[usize], cells: usize) -> Result<Vec<BenchRow>> {
    let Manufactured::OneD { problem, .. } = manufactured_problem(&Example::Ex1 { alpha1: 0.5, alpha2: 1.5 })?
    else {
        return Err(Error::Config("benchmark problem must be one-dimensional".into()));
    };
    let space = SpatialMesh1D::new(problem.length(), cells)?;
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in steps {
        let time = TimeMesh::new(problem.horizon(), n)?;
        let start = Instant::now();
        solve(&problem, &time, &space, backend)?;
        let seconds = start.elapsed().as_secs_f64();
        let ratio = rows.last().map(|p| seconds / p.seconds);
        rows.push(BenchRow { steps: n, seconds, ratio });
    }
    Ok(rows)
}
