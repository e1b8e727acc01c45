//! Log-ODE almost flow, flow composition over a mesh, truncated
//! expansions with residual diagnostics, and a classical reference solver.

pub mod davie;
pub mod flow;
pub mod logode;
pub mod reference;

pub use davie::{
    almost_flow_report, davie_expansion, davie_residual_report, dyadic_pairs, fit_loglog_slope, ResidualReport,
    ResidualRow, ScaleRow,
};
pub use flow::{mesh_indices, solve_flow, Divergence, FlowSolution, Mesh, SolveConfig};
pub use logode::{active_keys, davie_increment, logode_field, logode_step, rk4_unit, ElementarySum, DEFAULT_GUARD};
pub use reference::reference_ode_solve;
