//! Local-search drivers.
//!
//! Three families share the run-report plumbing here:
//!
//! * [`matroid_local_search`] — anytime best-swap search for a single
//!   matroid constraint;
//! * [`system_local_search`] — anytime best-exchange search over the
//!   q-reachable neighborhood of a p-matroid intersection or p-exchange
//!   system;
//! * [`geometric_local_search`] — first-qualifying-swap search for a single
//!   matroid that insists on a `(1 + ε/n)` multiplicative improvement per
//!   move.
//!
//! Each comes in oblivious, semi-oblivious, and non-oblivious variants.

mod geometric;
mod matroid;
mod score;
mod system;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use geometric::geometric_local_search;
pub use matroid::matroid_local_search;
pub use score::{non_oblivious_score, semi_oblivious_drop_map, ScoreContext};
pub use system::{exchange_size, system_local_search};

use crate::objective::OracleCounters;
use crate::set::SupportSet;

/// Selection rule used inside a local-search iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Evaluate `f` on every candidate exchange.
    Oblivious,
    /// Evaluate `f` once per candidate addition; drops are chosen by the
    /// smallest squared weight of the current restricted maximizer.
    SemiOblivious,
    /// Rank exchanges by the gradient/weight surrogate score; `f` is never
    /// evaluated on candidates.
    NonOblivious,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Oblivious => "oblivious",
            Variant::SemiOblivious => "semi-oblivious",
            Variant::NonOblivious => "non-oblivious",
        }
    }
}

/// Configuration shared by all search drivers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub variant: Variant,
    /// Maximum number of iterations (scans).
    pub max_iterations: usize,
    /// Reachability radius for p-systems; ignored by matroid drivers.
    pub q: usize,
    /// Target improvement rate for the geometric driver.
    pub epsilon: Option<f64>,
    pub record_trajectory: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: Variant::Oblivious,
            max_iterations: 1000,
            q: 1,
            epsilon: None,
            record_trajectory: true,
        }
    }
}

impl RunConfig {
    pub fn new(variant: Variant) -> Self {
        RunConfig {
            variant,
            ..Default::default()
        }
    }

    pub fn with_max_iterations(mut self, t: usize) -> Self {
        self.max_iterations = t;
        self
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// The iteration budget was exhausted while still improving.
    Budget,
    /// A full scan found no acceptable move.
    LocalOptimum,
}

/// One accepted exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub dropped: SupportSet,
    pub added: SupportSet,
}

/// Solution state after an accepted move (entry 0 is the initial solution).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Number of accepted moves so far.
    pub iteration: usize,
    pub set: SupportSet,
    /// True objective value of `set`.
    pub value: f64,
    pub step: Option<Move>,
    /// Cumulative oracle counters when this state was reached.
    pub f_calls: u64,
    pub grad_calls: u64,
}

/// Which driver produced a report; carried so certificates can select the
/// matching guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    MatroidAnytime,
    SystemAnytime,
    MatroidGeometric,
    Greedy,
    ModularApproximation,
    RandomSelection,
}

impl AlgorithmKind {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::MatroidAnytime => "matroid-local-search",
            AlgorithmKind::SystemAnytime => "system-local-search",
            AlgorithmKind::MatroidGeometric => "geometric-local-search",
            AlgorithmKind::Greedy => "greedy",
            AlgorithmKind::ModularApproximation => "modular-approximation",
            AlgorithmKind::RandomSelection => "random-selection",
        }
    }
}

/// Everything a run reports: the solution, the stop cause, oracle-call
/// accounting, and (optionally) the full per-move trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: AlgorithmKind,
    pub variant: Option<Variant>,
    pub q: Option<usize>,
    pub epsilon: Option<f64>,
    pub final_set: SupportSet,
    pub final_value: f64,
    /// Accepted moves (scans that improved the solution).
    pub iterations_used: usize,
    pub stop_reason: StopReason,
    /// Smoothness constant used by the non-oblivious score, when any.
    pub constant_used: Option<f64>,
    pub f_calls: u64,
    pub grad_calls: u64,
    pub wall_ms: f64,
    pub trajectory: Vec<TrajectoryPoint>,
}

/// Incremental builder for [`RunReport`] used by the drivers.
pub(crate) struct RunRecorder {
    algorithm: AlgorithmKind,
    variant: Option<Variant>,
    q: Option<usize>,
    epsilon: Option<f64>,
    constant_used: Option<f64>,
    record_trajectory: bool,
    trajectory: Vec<TrajectoryPoint>,
    moves: usize,
    started: Instant,
}

impl RunRecorder {
    pub fn new(algorithm: AlgorithmKind, record_trajectory: bool) -> Self {
        RunRecorder {
            algorithm,
            variant: None,
            q: None,
            epsilon: None,
            constant_used: None,
            record_trajectory,
            trajectory: Vec::new(),
            moves: 0,
            started: Instant::now(),
        }
    }

    pub fn variant(mut self, v: Variant) -> Self {
        self.variant = Some(v);
        self
    }

    pub fn q(mut self, q: usize) -> Self {
        self.q = Some(q);
        self
    }

    pub fn epsilon(mut self, e: Option<f64>) -> Self {
        self.epsilon = e;
        self
    }

    pub fn constant_used(&mut self, m: f64) {
        self.constant_used = Some(m);
    }

    /// Records a state whose true value is already known.
    pub fn record(
        &mut self,
        set: &SupportSet,
        value: f64,
        step: Option<Move>,
        counters: OracleCounters,
    ) {
        if step.is_some() {
            self.moves += 1;
        }
        if self.record_trajectory {
            self.trajectory.push(TrajectoryPoint {
                iteration: self.moves,
                set: set.clone(),
                value,
                step,
                f_calls: counters.f_calls,
                grad_calls: counters.grad_calls,
            });
        }
    }

    pub fn finish(
        self,
        final_set: SupportSet,
        final_value: f64,
        stop_reason: StopReason,
        counters: OracleCounters,
    ) -> RunReport {
        RunReport {
            algorithm: self.algorithm,
            variant: self.variant,
            q: self.q,
            epsilon: self.epsilon,
            final_set,
            final_value,
            iterations_used: self.moves,
            stop_reason,
            constant_used: self.constant_used,
            f_calls: counters.f_calls,
            grad_calls: counters.grad_calls,
            wall_ms: self.started.elapsed().as_secs_f64() * 1e3,
            trajectory: self.trajectory,
        }
    }
}
