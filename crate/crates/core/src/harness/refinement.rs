//! Convergence studies.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::distributed::solve_distributed;
use crate::error::{Error, Result};
use crate::mesh::{SpatialMesh1D, SpatialMesh2D, TimeMesh};
use crate::solver1d::solve;
use crate::solver2d::solve_2d;

use super::config::{ExperimentConfig, RefineAxis};
use super::manufactured::{manufactured_problem, Manufactured};

/// One refinement level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub resolution: usize,
    /// Max interior nodal error at the final time.
    pub error: f64,
    /// Observed order against the previous row.
    pub order: Option<f64>,
    pub seconds: f64,
    #[serde(default)]
    pub l2_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub label: String,
    pub axis: RefineAxis,
    pub rows: Vec<RefinementRow>,
}

impl ConvergenceReport {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn last_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }
}

/// `log(E_prev / E) / log(r / r_prev)`; `None` unless both errors are positive.
pub fn observed_order(prev_error: f64, error: f64, prev_resolution: f64, resolution: f64) -> Option<f64> {
    (prev_error > 0.0 && error > 0.0 && resolution != prev_resolution)
        .then(|| (prev_error / error).ln() / (resolution / prev_resolution).ln())
}

/// Errors (max norm, optional L²) of one solve at the final time.
pub fn solve_level(
    problem: &Manufactured,
    config: &ExperimentConfig,
    steps: usize,
    cells: usize,
) -> Result<(f64, Option<f64>)> {
    let time = TimeMesh::new(problem.horizon(), steps)?;
    match problem {
        Manufactured::OneD { problem, exact } => {
            let space = SpatialMesh1D::new(problem.length(), cells)?;
            let u = solve(problem, &time, &space, config.backend)?;
            let l2 = config.l2.then(|| u.l2_error(steps, exact.as_ref()));
            Ok((u.max_error(steps, exact.as_ref()), l2))
        }
        Manufactured::Distributed { distribution, shell, exact } => {
            let space = SpatialMesh1D::new(shell.length(), cells)?;
            let u = solve_distributed(distribution, shell, &time, &space, config.backend)?;
            let l2 = config.l2.then(|| u.l2_error(steps, exact.as_ref()));
            Ok((u.max_error(steps, exact.as_ref()), l2))
        }
        Manufactured::TwoD { problem, exact } => {
            let space = SpatialMesh2D::new(std::f64::consts::PI, std::f64::consts::PI, cells, cells)?;
            let u = solve_2d(problem, &time, &space, config.backend)?;
            Ok((u.max_error(steps, exact.as_ref()), None))
        }
    }
}

/// Runs every resolution of `config` in order, timing each solve.
pub fn run_refinement(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let mut rows: Vec<RefinementRow> = Vec::with_capacity(config.resolutions.len());
    for &r in &config.resolutions {
        let wrap = |e: Error| Error::Refinement { resolution: r, source: Box::new(e) };
        let (steps, cells, example) = config.level(r);
        let problem = manufactured_problem(&example).map_err(wrap)?;
        let start = Instant::now();
        let (error, l2_error) = solve_level(&problem, config, steps, cells).map_err(wrap)?;
        let seconds = start.elapsed().as_secs_f64();
        let order = rows
            .last()
            .and_then(|p| observed_order(p.error, error, p.resolution as f64, r as f64));
        rows.push(RefinementRow { resolution: r, error, order, seconds, l2_error });
    }
    Ok(ConvergenceReport {
        label: format!("{} ({:?} backend)", config.example, config.backend).to_lowercase(),
        axis: config.refine,
        rows,
    })
}
