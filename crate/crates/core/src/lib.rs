//! Compact finite-difference solvers for multi-term and distributed-order
//! time-fractional sub-/super-diffusion equations.

pub mod distributed;
pub mod error;
pub mod harness;
pub mod kernels;
pub mod mesh;
pub mod spatial;
pub mod special;
pub mod solver1d;
pub mod solver2d;
pub mod toeplitz;

pub use error::{Error, Result};
