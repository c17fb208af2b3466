//! Sector resolvents `G_l(z)` and the entanglement density of states.
//!
//! `p_l(x) = -Im G_l(x + i0) / pi` in the raw eigenvalue variable `x`; the
//! normalized variable is `eps = eps_scale * x` so that the mean of `p(eps)`
//! is one.

pub mod blockaded;
mod density;
pub mod fixed_point;
pub mod mp;
mod phase;

pub use blockaded::{blockaded_edges, blockaded_resolvent};
pub use density::{
    blockaded_density, density, diagonal_density, fixed_point_density, generic_rank_fraction, Grid, Method,
    SpectralDensity, DEFAULT_GRID_POINTS,
};
pub use fixed_point::{boundary_resolvent, solve_fixed_point, ResolventValue, SolverOptions};
pub use mp::{mp_density, mp_resolvent, mp_unbalanced, UnbalancedMp};
pub use phase::{
    blockaded_gap_slope, classify_phase, fit_edge_exponent, fit_small_eps_exponent, loglog_slope,
    unbalanced_gap_slope, Phase, PhaseReport, DEFAULT_FIT_WINDOW, FIT_POINTS, MULTICRITICAL_TOL,
};
