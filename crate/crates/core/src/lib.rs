//! Entanglement spectra of Gaussian random pure states in constrained
//! Hilbert spaces.
//!
//! Three independent routes to the same spectral data cross-check each other:
//!
//! - [`diagrams`]: planar Wick-contraction combinatorics for the trace moments;
//! - [`resolvent`]: self-consistent sector resolvents and the density of
//!   states `p(eps)`, in closed form for the blockaded chain and numerically
//!   for any compatibility matrix;
//! - [`montecarlo`]: direct diagonalization of sampled block-structured states.
//!
//! [`entropy`] turns densities into average and infinite-temperature Renyi
//! entropies and their difference, the Page correction.
//!
//! ```
//! use entspec::{asymptotic_spec, normalized_moment, ModelKind, GOLDEN};
//!
//! let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN }).unwrap();
//! let mu2 = normalized_moment(&spec, 2).unwrap();
//! assert!((mu2 - 2.0944272).abs() < 1e-7);
//! ```

pub mod cli;
pub mod diagrams;
pub mod entropy;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod resolvent;
pub mod space;

pub use diagrams::{
    catalan, enumerate_pairings, finite_moment_exact, loop_structure, normalized_moment, planar_moment, sector_sum,
    LoopGraph, WickPairing,
};
pub use entropy::{
    avg_entropy, inf_temp_entropy, moment_integral, page_asymptote, page_correction, shannon_integral,
    EntropyReport,
};
pub use error::{Error, Result};
pub use montecarlo::{
    empirical_cdf_distance, moment_estimate, sample_spectrum, self_averaging_scan, EmpiricalSpectrum, SampleConfig,
};
pub use resolvent::{
    blockaded_density, blockaded_edges, blockaded_resolvent, classify_phase, density, diagonal_density,
    fit_small_eps_exponent, mp_density, mp_unbalanced, solve_fixed_point, Method, Phase, ResolventValue,
    SolverOptions, SpectralDensity,
};
pub use space::{
    asymptotic_spec, blockaded_chain_space, scaling_constants, ConstraintSpec, FiniteConstrainedSpace, ModelKind,
    ScalingConstants, GOLDEN,
};
