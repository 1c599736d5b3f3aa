//! Smooth concave utilities and the lifted set-function oracle.
//!
//! A [`SetOracle`] turns a smooth utility `u` (with `u(0) = 0`) into the
//! monotone set function `f(X) = max_{supp(w) ⊆ X} u(w)`, solving the
//! restricted maximization exactly for quadratic objectives and by
//! projected gradient ascent otherwise. The oracle counts set-function and
//! gradient evaluations; these counters are the quantities reported by the
//! experiment harness, so inner-solver iterations never touch them.

mod constants;
mod ising;
mod quadratic;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use constants::{ConstantsProvenance, RestrictedConstants};
pub use ising::IsingPll;
pub use quadratic::QuadraticR2;

use crate::error::{Error, Result};
use crate::set::SupportSet;

/// A continuously differentiable utility over `R^n` with `u(0) = 0`.
///
/// Implementations must be deterministic: repeated calls with the same
/// argument return identical values.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    /// `u(w)`; `w.len()` must equal `dim()`.
    fn eval(&self, w: &[f64]) -> f64;

    /// `∇u(w)`.
    fn grad(&self, w: &[f64]) -> Vec<f64>;

    /// Kind-specific restricted maximizer, if one is available. Returning
    /// `None` selects the generic projected-gradient solver.
    fn restricted_argmax(&self, _support: &[usize], _cfg: &SolverConfig) -> Option<RestrictedSolve> {
        None
    }
}

/// Inner-solver contract for restricted maximization: iterate until the
/// restricted gradient norm falls below `tol` or `max_iters` is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iters: 500,
        }
    }
}

/// Result of one restricted maximization.
#[derive(Debug, Clone)]
pub struct RestrictedSolve {
    /// Maximizer, dense, zero off the support.
    pub w: Vec<f64>,
    /// `u(w)`, i.e. the value of `f` on the support.
    pub value: f64,
    /// Whether a ridge fallback was needed for a rank-deficient system.
    pub regularized: bool,
}

/// Oracle-call counters. `f_calls` counts restricted maximizations (one per
/// requested set-function value), `grad_calls` counts gradient evaluations
/// requested by search drivers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounters {
    pub f_calls: u64,
    pub grad_calls: u64,
}

/// Value and gradient oracle for `f(X) = max_{supp(w) ⊆ X} u(w)`, with call
/// accounting. Single-owner per run: concurrent runs clone the oracle, which
/// shares the underlying objective data and resets the counters.
#[derive(Clone)]
pub struct SetOracle {
    objective: Arc<dyn Objective>,
    solver: SolverConfig,
    counters: OracleCounters,
    regularized_solves: u64,
}

impl SetOracle {
    pub fn new(objective: Arc<dyn Objective>) -> Self {
        SetOracle {
            objective,
            solver: SolverConfig::default(),
            counters: OracleCounters::default(),
            regularized_solves: 0,
        }
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn objective(&self) -> &Arc<dyn Objective> {
        &self.objective
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.solver
    }

    pub fn counters(&self) -> OracleCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = OracleCounters::default();
        self.regularized_solves = 0;
    }

    /// Number of restricted solves that needed the ridge fallback.
    pub fn regularized_solves(&self) -> u64 {
        self.regularized_solves
    }

    /// A fresh oracle over the same objective data with zeroed counters.
    pub fn fork(&self) -> Self {
        let mut out = self.clone();
        out.reset_counters();
        out
    }

    /// `u(w)` with dimension validation.
    pub fn eval_u(&self, w: &[f64]) -> Result<f64> {
        self.check_dim(w)?;
        Ok(self.objective.eval(w))
    }

    /// `∇u(w)` with dimension validation. Does not count as a gradient
    /// oracle call; use [`SetOracle::gradient`] inside search loops.
    pub fn grad_u(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(w)?;
        Ok(self.objective.grad(w))
    }

    /// Counted gradient evaluation.
    pub fn gradient(&mut self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(w)?;
        self.counters.grad_calls += 1;
        Ok(self.objective.grad(w))
    }

    /// `f(X)`. One `f_call`.
    pub fn value(&mut self, x: &SupportSet) -> Result<f64> {
        Ok(self.restricted_maximizer(x)?.value)
    }

    /// `f(X)` together with the restricted maximizer `w^(X)`. One `f_call`.
    pub fn restricted_maximizer(&mut self, x: &SupportSet) -> Result<RestrictedSolve> {
        x.check_range(self.dim())?;
        self.counters.f_calls += 1;
        if x.is_empty() {
            return Ok(RestrictedSolve {
                w: vec![0.0; self.dim()],
                value: 0.0,
                regularized: false,
            });
        }
        let solve = match self.objective.restricted_argmax(x.members(), &self.solver) {
            Some(solve) => solve,
            None => projected_gradient_ascent(self.objective.as_ref(), x.members(), &self.solver),
        };
        if solve.regularized {
            self.regularized_solves += 1;
        }
        debug_assert!(solve.w.len() == self.dim());
        Ok(solve)
    }

    /// `f(X + e) - f(X)`. Two `f_calls`.
    pub fn marginal_gain(&mut self, x: &SupportSet, e: usize) -> Result<f64> {
        if x.contains(e) {
            return Err(Error::InfeasibleInput(format!(
                "element {e} is already in {x}"
            )));
        }
        let with = self.value(&x.with(e))?;
        let without = self.value(x)?;
        Ok(with - without)
    }

    fn check_dim(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: w.len(),
            });
        }
        Ok(())
    }
}

/// Generic restricted maximizer: projected gradient ascent on the support
/// coordinates with Barzilai-Borwein steps and an Armijo backtracking
/// safeguard. Used for objectives without a specialized solver.
fn projected_gradient_ascent(
    obj: &dyn Objective,
    support: &[usize],
    cfg: &SolverConfig,
) -> RestrictedSolve {
    let n = obj.dim();
    let mut w = vec![0.0; n];
    let mut value = obj.eval(&w);
    let mut grad = obj.grad(&w);
    let mut step = 1.0;
    let mut prev_w: Option<Vec<f64>> = None;
    let mut prev_grad: Option<Vec<f64>> = None;

    for _ in 0..cfg.max_iters {
        let gnorm_sq: f64 = support.iter().map(|&i| grad[i] * grad[i]).sum();
        if gnorm_sq.sqrt() <= cfg.tol {
            break;
        }
        if let (Some(pw), Some(pg)) = (&prev_w, &prev_grad) {
            let mut ss = 0.0;
            let mut sy = 0.0;
            for &i in support {
                let ds = w[i] - pw[i];
                let dg = grad[i] - pg[i];
                ss += ds * ds;
                sy += ds * dg;
            }
            // Ascent on a concave function: <Δw, Δg> <= 0.
            if sy < -1e-300 {
                step = ss / (-sy);
            }
        }
        step = step.clamp(1e-12, 1e12);

        prev_w = Some(w.clone());
        prev_grad = Some(grad.clone());
        let mut t = step;
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand = w.clone();
            for &i in support {
                cand[i] += t * grad[i];
            }
            let cand_value = obj.eval(&cand);
            if cand_value >= value + 1e-4 * t * gnorm_sq {
                w = cand;
                value = cand_value;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break; // no ascent direction left at machine precision
        }
        grad = obj.grad(&w);
    }

    RestrictedSolve {
        w,
        value,
        regularized: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A custom smooth concave objective with no specialized solver,
    /// exercising the generic projected-gradient path:
    /// u(w) = sum_i (a_i w_i - w_i^2) with u(0) = 0.
    struct DiagQuad {
        a: Vec<f64>,
    }

    impl Objective for DiagQuad {
        fn dim(&self) -> usize {
            self.a.len()
        }
        fn eval(&self, w: &[f64]) -> f64 {
            self.a
                .iter()
                .zip(w)
                .map(|(ai, wi)| ai * wi - wi * wi)
                .sum()
        }
        fn grad(&self, w: &[f64]) -> Vec<f64> {
            self.a
                .iter()
                .zip(w)
                .map(|(ai, wi)| ai - 2.0 * wi)
                .collect()
        }
    }

    #[test]
    fn generic_solver_matches_closed_form() {
        let obj = Arc::new(DiagQuad {
            a: vec![2.0, -4.0, 6.0],
        });
        let mut oracle = SetOracle::new(obj);
        // Restricted to {0, 2}: maximizer w = a/2 on support, value sum a_i^2/4.
        let solve = oracle
            .restricted_maximizer(&SupportSet::from_iter([0, 2]))
            .unwrap();
        assert!((solve.w[0] - 1.0).abs() < 1e-7);
        assert_eq!(solve.w[1], 0.0);
        assert!((solve.w[2] - 3.0).abs() < 1e-7);
        assert!((solve.value - 10.0).abs() < 1e-9);
    }

    #[test]
    fn empty_support_is_zero() {
        let obj = Arc::new(DiagQuad { a: vec![1.0, 2.0] });
        let mut oracle = SetOracle::new(obj);
        let solve = oracle.restricted_maximizer(&SupportSet::empty()).unwrap();
        assert_eq!(solve.value, 0.0);
        assert!(solve.w.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn marginal_gain_rejects_member() {
        let obj = Arc::new(DiagQuad { a: vec![1.0, 2.0] });
        let mut oracle = SetOracle::new(obj);
        let x = SupportSet::singleton(0);
        assert!(oracle.marginal_gain(&x, 0).is_err());
        assert!(oracle.marginal_gain(&x, 1).unwrap() > 0.0);
    }

    #[test]
    fn counters_track_calls() {
        let obj = Arc::new(DiagQuad { a: vec![1.0, 2.0] });
        let mut oracle = SetOracle::new(obj);
        let x = SupportSet::singleton(1);
        let _ = oracle.value(&x).unwrap();
        let solve = oracle.restricted_maximizer(&x).unwrap();
        let _ = oracle.gradient(&solve.w).unwrap();
        assert_eq!(
            oracle.counters(),
            OracleCounters {
                f_calls: 2,
                grad_calls: 1
            }
        );
        let fork = oracle.fork();
        assert_eq!(fork.counters(), OracleCounters::default());
        assert_eq!(oracle.counters().f_calls, 2);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let obj = Arc::new(DiagQuad { a: vec![1.0, 2.0] });
        let oracle = SetOracle::new(obj);
        assert!(matches!(
            oracle.eval_u(&[0.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
