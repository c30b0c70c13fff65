//! Manufactured-solution experiments, convergence reports and self-checks.

pub mod bench;
pub mod config;
pub mod manufactured;
pub mod refinement;
pub mod report;
pub mod verify;

pub use bench::{run_bench, BenchRow};
pub use config::{ExperimentConfig, Outputs, RefineAxis};
pub use manufactured::{manufactured_problem, Example, Manufactured};
pub use refinement::{observed_order, run_refinement, ConvergenceReport, RefinementRow};
pub use report::{emit_report, render, ReportFormat};
pub use verify::CheckOutcome;
