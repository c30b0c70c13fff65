//! Experiment descriptions, loadable from JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver1d::Backend;

use super::Example;

/// Which discretization parameter a study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefineAxis {
    /// Number of time steps `N`.
    Time,
    /// Number of spatial cells `M` (per direction in 2D).
    Space,
    /// Quadrature cells `J` of a distributed-order example.
    Sigma,
}

impl RefineAxis {
    /// Slope of the reference line in plots.
    pub fn reference_slope(self) -> f64 {
        match self {
            Self::Time => 1.0,
            Self::Space => 4.0,
            Self::Sigma => 2.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Time => "N",
            Self::Space => "M",
            Self::Sigma => "J",
        }
    }
}

impl std::str::FromStr for RefineAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(Self::Time),
            "space" => Ok(Self::Space),
            "sigma" => Ok(Self::Sigma),
            other => Err(Error::Config(format!("unknown refinement axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub markdown: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub example: Example,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    pub refine: RefineAxis,
    pub resolutions: Vec<usize>,
    /// `N` when it is not the refined parameter.
    #[serde(default)]
    pub steps: Option<usize>,
    /// `M` when it is not the refined parameter.
    #[serde(default)]
    pub cells: Option<usize>,
    /// Also record the discrete L² error.
    #[serde(default)]
    pub l2: bool,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_backend() -> Backend {
    Backend::Fast
}

pub const DEFAULT_STEPS: usize = 1024;
pub const DEFAULT_CELLS: usize = 16;

impl ExperimentConfig {
    pub fn new(example: Example, refine: RefineAxis, resolutions: Vec<usize>) -> Self {
        Self {
            example,
            backend: Backend::Fast,
            refine,
            resolutions,
            steps: None,
            cells: None,
            l2: false,
            outputs: Outputs::default(),
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = Some(steps);
        self
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = Some(cells);
        self
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolutions.len() < 2 {
            return Err(Error::Config("a refinement study needs at least two resolutions".into()));
        }
        if self.resolutions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("resolutions must be strictly increasing".into()));
        }
        if self.refine == RefineAxis::Sigma && !matches!(self.example, Example::Ex2 { .. }) {
            return Err(Error::Config("sigma refinement needs a distributed-order example".into()));
        }
        Ok(())
    }

    /// `(N, M, example)` used at one resolution.
    pub fn level(&self, resolution: usize) -> (usize, usize, Example) {
        let steps = self.steps.unwrap_or(DEFAULT_STEPS);
        let cells = self.cells.unwrap_or(DEFAULT_CELLS);
        match self.refine {
            RefineAxis::Time => (resolution, cells, self.example),
            RefineAxis::Space => (steps, resolution, self.example),
            RefineAxis::Sigma => (steps, cells, self.example.with_intervals(resolution)),
        }
    }
}
