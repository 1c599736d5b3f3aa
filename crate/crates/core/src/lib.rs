//! Local search for monotone set-function maximization arising from sparse
//! optimization.
//!
//! The library maximizes set functions of the form `f(X) = max u(w)` over
//! vectors `w` supported on `X`, where `u` is a smooth concave utility
//! (squared multiple correlation for regression, pseudo-log-likelihood for
//! Ising models), subject to matroid, matroid-intersection, or b-matching
//! constraints.
//!
//! Three local-search variants are provided, trading oracle cost for
//! guidance quality:
//!
//! * **oblivious** — evaluates `f` on every candidate exchange;
//! * **semi-oblivious** — evaluates `f` once per candidate addition, with a
//!   weight-guided drop rule;
//! * **non-oblivious** — scores exchanges from one restricted maximizer and
//!   one gradient per iteration, never touching `f` on candidates.
//!
//! Every run carries enough accounting for the [`certify`] module to verify
//! the approximation guarantees against brute-force optima on small
//! instances.

pub mod baselines;
pub mod certify;
pub mod constraints;
pub mod corpus;
pub mod error;
pub mod objective;
pub mod search;
pub mod set;

pub use crate::constraints::{
    extend_to_maximal, extend_to_maximal_asc, q_reachable_neighborhood, swap_neighborhood,
    IndependenceSystem, Matroid, NeighborhoodSpec,
};
pub use crate::error::{Error, Result};
pub use crate::objective::{
    IsingPll, Objective, OracleCounters, QuadraticR2, RestrictedConstants, SetOracle, SolverConfig,
};
pub use crate::search::{
    geometric_local_search, matroid_local_search, system_local_search, RunConfig, RunReport,
    StopReason, Variant,
};
pub use crate::set::{GroundSet, SupportSet};
