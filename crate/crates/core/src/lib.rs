//! Multi-index rough paths.
//!
//! Exact algebra over multi-indices and forests, truncated characters and
//! their lifts, elementary differentials, a log-ODE flow solver, and
//! translations of paths and vector fields.

pub mod algebra;
pub mod differentials;
pub mod error;
pub mod rough_path;
pub mod scalar;
pub mod solver;
pub mod translation;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type GroupElementF64 = rough_path::GroupElement<f64>;
pub type GroupElementF32 = rough_path::GroupElement<f32>;
pub type LieElementF64 = rough_path::LieElement<f64>;
pub type LieElementF32 = rough_path::LieElement<f32>;
pub type RoughPathF64 = rough_path::RoughPathGrid<f64>;
pub type RoughPathF32 = rough_path::RoughPathGrid<f32>;
pub type FlowSolutionF64 = solver::FlowSolution<f64>;
pub type FlowSolutionF32 = solver::FlowSolution<f32>;
