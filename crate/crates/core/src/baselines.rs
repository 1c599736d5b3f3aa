//! Reference algorithms: modular approximation, greedy, random selection,
//! and exact brute force.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{
    extend_to_maximal, extend_to_maximal_asc, q_reachable_neighborhood, IndependenceSystem,
    NeighborhoodSpec,
};
use crate::error::{Error, Result};
use crate::objective::SetOracle;
use crate::search::{AlgorithmKind, Move, RunRecorder, RunReport, StopReason};
use crate::set::SupportSet;

/// Singleton gains `f({x}) - f(∅)` per element; the weights of the linear
/// surrogate `f̃(X) = f(∅) + Σ_{x∈X} f(x|∅)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModularProfile {
    pub singleton_gains: Vec<f64>,
}

impl ModularProfile {
    pub fn compute(oracle: &mut SetOracle) -> Result<Self> {
        let gains = (0..oracle.dim())
            .map(|e| oracle.value(&SupportSet::singleton(e)))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ModularProfile {
            singleton_gains: gains,
        })
    }

    pub fn surrogate_value(&self, x: &SupportSet) -> f64 {
        x.iter().map(|e| self.singleton_gains[e]).sum()
    }
}

/// Maximizes the linear surrogate `f̃` instead of `f`: exactly by
/// weight-greedy on matroids, by oblivious local search with radius `q` on
/// p-systems. The reported value is the true `f` of the selected set.
pub fn modular_approximation(
    oracle: &mut SetOracle,
    sys: &IndependenceSystem,
    q: usize,
) -> Result<RunReport> {
    let mut recorder = RunRecorder::new(AlgorithmKind::ModularApproximation, false).q(q);
    let profile = ModularProfile::compute(oracle)?;
    let selected = maximize_surrogate(&profile, sys, q)?;
    let value = oracle.value(&selected)?;
    recorder.record(&selected, value, None, oracle.counters());
    Ok(recorder.finish(selected, value, StopReason::LocalOptimum, oracle.counters()))
}

/// Surrogate maximizer used by [`modular_approximation`]; public so tests
/// can compare it against brute force on the surrogate directly.
pub fn maximize_surrogate(
    profile: &ModularProfile,
    sys: &IndependenceSystem,
    q: usize,
) -> Result<SupportSet> {
    if sys.is_matroid() {
        // Weight-greedy over positive gains is exact for linear objectives
        // on a matroid; ties broken by ascending id.
        let mut order: Vec<usize> = (0..sys.n()).collect();
        order.sort_by(|&a, &b| {
            profile.singleton_gains[b]
                .total_cmp(&profile.singleton_gains[a])
                .then(a.cmp(&b))
        });
        let mut x = SupportSet::empty();
        for e in order {
            if profile.singleton_gains[e] <= 0.0 {
                break;
            }
            let candidate = x.with(e);
            if sys.is_independent(&candidate)? {
                x = candidate;
            }
        }
        return Ok(x);
    }
    // p-system: oblivious local search on the surrogate. Surrogate values
    // are arithmetic, so this costs no f evaluations.
    let spec = NeighborhoodSpec::for_system(sys, q)?;
    let mut x = extend_to_maximal_asc(sys, &SupportSet::empty())?;
    let mut current = profile.surrogate_value(&x);
    // The surrogate strictly increases on accepted moves, so termination is
    // guaranteed; the cap is a safety net.
    for _ in 0..10_000 {
        let mut best: Option<(f64, SupportSet)> = None;
        for candidate in q_reachable_neighborhood(sys, &x, &spec)? {
            let value = profile.surrogate_value(&candidate);
            if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
                best = Some((value, candidate));
            }
        }
        match best {
            Some((value, candidate)) if value - current > 1e-12 => {
                x = candidate;
                current = value;
            }
            _ => break,
        }
    }
    Ok(x)
}

/// Adds the feasible element with the largest marginal gain until the
/// solution is maximal; ties broken by ascending id.
pub fn greedy(oracle: &mut SetOracle, sys: &IndependenceSystem) -> Result<RunReport> {
    let mut recorder = RunRecorder::new(AlgorithmKind::Greedy, true);
    let mut x = SupportSet::empty();
    let mut f_x = oracle.value(&x)?;
    recorder.record(&x, f_x, None, oracle.counters());
    loop {
        let mut best: Option<(f64, usize)> = None;
        for e in 0..sys.n() {
            if x.contains(e) {
                continue;
            }
            let candidate = x.with(e);
            if !sys.is_independent(&candidate)? {
                continue;
            }
            let value = oracle.value(&candidate)?;
            if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
                best = Some((value, e));
            }
        }
        match best {
            Some((value, e)) => {
                x = x.with(e);
                recorder.record(
                    &x,
                    value,
                    Some(Move {
                        dropped: SupportSet::empty(),
                        added: SupportSet::singleton(e),
                    }),
                    oracle.counters(),
                );
                f_x = value;
            }
            None => break,
        }
    }
    Ok(recorder.finish(x, f_x, StopReason::LocalOptimum, oracle.counters()))
}

/// A seeded uniformly-shuffled maximal feasible set.
pub fn random_selection(sys: &IndependenceSystem, seed: u64) -> Result<SupportSet> {
    let mut order: Vec<usize> = (0..sys.n()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    extend_to_maximal(sys, &SupportSet::empty(), &order)
}

/// Exact maximum of `f` over the feasible sets, by depth-first enumeration
/// with downward-closure pruning. Monotonicity means only sets with no
/// feasible extension need evaluating. Guarded to `n <= 20`.
pub fn brute_force_opt(
    oracle: &mut SetOracle,
    sys: &IndependenceSystem,
) -> Result<(SupportSet, f64)> {
    if sys.n() > 20 {
        return Err(Error::TooLarge(format!(
            "brute force over n = {} refused (limit 20)",
            sys.n()
        )));
    }
    let n = sys.n();
    let mut best: Option<(f64, SupportSet)> = None;
    let mut stack = vec![(SupportSet::empty(), 0usize)];
    while let Some((x, start)) = stack.pop() {
        let mut extendable = false;
        for e in 0..n {
            if x.contains(e) {
                continue;
            }
            let candidate = x.with(e);
            if sys.is_independent(&candidate)? {
                extendable = true;
                if e >= start {
                    stack.push((candidate, e + 1));
                }
            }
        }
        if !extendable {
            let value = oracle.value(&x)?;
            let better = match &best {
                None => true,
                Some((bv, bx)) => value > *bv || (value == *bv && x < *bx),
            };
            if better {
                best = Some((value, x));
            }
        }
    }
    let (value, x) = best.expect("the empty set is always feasible");
    Ok((x, value))
}
