//! Uniform meshes in time and space.

use crate::error::{domain, Result};

/// `t_n = n τ`, `τ = T / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeMesh {
    horizon: f64,
    steps: usize,
    tau: f64,
}

impl TimeMesh {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return domain(format!("time horizon {horizon} must be positive"));
        }
        if steps == 0 {
            return domain("time mesh needs at least one step");
        }
        Ok(Self {
            horizon,
            steps,
            tau: horizon / steps as f64,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }
}

/// `x_i = i h`, `h = L / M`, `0 <= i <= M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialMesh1D {
    length: f64,
    cells: usize,
    h: f64,
}

impl SpatialMesh1D {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("domain length {length} must be positive"));
        }
        if cells < 2 {
            return domain(format!("spatial mesh needs M >= 2 cells, got {cells}"));
        }
        Ok(Self {
            length,
            cells,
            h: length / cells as f64,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of cells `M`; there are `M + 1` nodes and `M - 1` interior nodes.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn interior_len(&self) -> usize {
        self.cells - 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.cells {
            self.length
        } else {
            i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.cells).map(move |i| self.node(i))
    }
}

/// Tensor product of two 1D meshes; `x` is the first array axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialMesh2D {
    pub x: SpatialMesh1D,
    pub y: SpatialMesh1D,
}

impl SpatialMesh2D {
    pub fn new(lx: f64, ly: f64, mx: usize, my: usize) -> Result<Self> {
        Ok(Self {
            x: SpatialMesh1D::new(lx, mx)?,
            y: SpatialMesh1D::new(ly, my)?,
        })
    }
}
