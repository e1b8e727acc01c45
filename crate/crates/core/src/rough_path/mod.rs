//! Truncated characters, Chen composition, exp/log, norms and lifts.

pub mod basis;
pub mod grid;
pub mod group;
pub mod io;
pub mod lift;

pub use basis::{LiftMode, TruncatedBasis};
pub use grid::RoughPathGrid;
pub use group::{star_dense, GroupElement, LieElement};
pub use io::{read_samples_csv, write_samples_csv, Samples};
pub use lift::{
    affine_coefficients, brownian_samples, lift_brownian, lift_piecewise_linear, lift_samples, step_increment,
    BrownianMode, BROWNIAN_MAX_LEVEL, RNG_NAME,
};
