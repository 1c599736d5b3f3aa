//! Geometric-improvement local search for a single matroid constraint.
//!
//! Instead of taking the best swap, each pass takes the *first* swap (in
//! deterministic scan order) whose improvement meets a multiplicative
//! threshold of `1 + δ` with `δ = ε/n`, and stops when a full pass finds
//! none. The starting point is the best singleton extended to a maximal
//! set, which pins the total number of accepted moves to at most
//! `log_{1+δ}(s·M₁/m_s)`.

use crate::constraints::{extend_to_maximal_asc, swap_neighborhood, IndependenceSystem};
use crate::error::{Error, Result};
use crate::objective::{RestrictedConstants, SetOracle};
use crate::search::matroid::lookup_swap_smoothness;
use crate::search::score::{semi_oblivious_drop_map, ScoreContext};
use crate::search::{AlgorithmKind, Move, RunConfig, RunRecorder, RunReport, StopReason, Variant};
use crate::set::SupportSet;

/// Accepted improvements must clear the relative threshold and this absolute
/// floor, which prevents cycling on exact-zero objective values.
const MIN_GAIN: f64 = 1e-12;

pub fn geometric_local_search(
    oracle: &mut SetOracle,
    sys: &IndependenceSystem,
    cfg: &RunConfig,
    constants: Option<&RestrictedConstants>,
) -> Result<RunReport> {
    if !sys.is_matroid() {
        return Err(Error::Config(
            "geometric local search requires a single matroid constraint".into(),
        ));
    }
    let epsilon = cfg
        .epsilon
        .ok_or_else(|| Error::Config("geometric search needs epsilon".into()))?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let n = sys.n();
    let delta = epsilon / n as f64;
    let m_const = match cfg.variant {
        Variant::NonOblivious => Some(lookup_swap_smoothness(sys, constants)?),
        _ => None,
    };

    let mut recorder = RunRecorder::new(AlgorithmKind::MatroidGeometric, cfg.record_trajectory)
        .variant(cfg.variant)
        .epsilon(Some(epsilon));
    if let Some(m) = m_const {
        recorder.constant_used(m);
    }

    // Initial solution: the best singleton (ties to the smallest id),
    // extended to a maximal set in ascending order.
    let mut best_singleton = (f64::NEG_INFINITY, 0usize);
    for e in 0..n {
        let v = oracle.value(&SupportSet::singleton(e))?;
        if v > best_singleton.0 {
            best_singleton = (v, e);
        }
    }
    let mut x = extend_to_maximal_asc(sys, &SupportSet::singleton(best_singleton.1))?;

    let solve = oracle.restricted_maximizer(&x)?;
    let mut f_x = solve.value;
    let mut w_x = solve.w;
    recorder.record(&x, f_x, None, oracle.counters());

    let mut stop = StopReason::Budget;
    for _ in 0..cfg.max_iterations {
        debug_assert!(sys.is_independent(&x)?);
        let hit = match cfg.variant {
            Variant::Oblivious => {
                let mut found = None;
                for (drop, add) in swap_neighborhood(sys, &x)? {
                    let cand = oracle.restricted_maximizer(&x.without(drop).with(add))?;
                    if cand.value >= (1.0 + delta) * f_x && cand.value - f_x > MIN_GAIN {
                        found = Some((cand.value, cand.w, drop, add));
                        break;
                    }
                }
                found
            }
            Variant::SemiOblivious => {
                let mut found = None;
                for add in 0..n {
                    if x.contains(add) {
                        continue;
                    }
                    let Some(drop_set) = semi_oblivious_drop_map(
                        sys,
                        &x,
                        &SupportSet::singleton(add),
                        &w_x,
                        None,
                    )?
                    else {
                        continue;
                    };
                    let drop = drop_set.members()[0];
                    let cand = oracle.restricted_maximizer(&x.without(drop).with(add))?;
                    if cand.value >= (1.0 + delta) * f_x && cand.value - f_x > MIN_GAIN {
                        found = Some((cand.value, cand.w, drop, add));
                        break;
                    }
                }
                found
            }
            Variant::NonOblivious => {
                let m = m_const.expect("checked above");
                let ctx = ScoreContext::at(oracle, &x, m)?;
                let mut found = None;
                for (drop, add) in swap_neighborhood(sys, &x)? {
                    let score = ctx.score_swap(drop, add);
                    if score >= delta * f_x && score > MIN_GAIN {
                        // The score lower-bounds the true gain; the accepted
                        // state's value is refreshed below.
                        let cand = oracle.restricted_maximizer(&x.without(drop).with(add))?;
                        found = Some((cand.value, cand.w, drop, add));
                        break;
                    }
                }
                found
            }
        };
        match hit {
            Some((value, w, drop, add)) => {
                x = x.without(drop).with(add);
                f_x = value;
                w_x = w;
                recorder.record(
                    &x,
                    f_x,
                    Some(Move {
                        dropped: SupportSet::singleton(drop),
                        added: SupportSet::singleton(add),
                    }),
                    oracle.counters(),
                );
            }
            None => {
                stop = StopReason::LocalOptimum;
                break;
            }
        }
    }
    Ok(recorder.finish(x, f_x, stop, oracle.counters()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::objective::QuadraticR2;

    fn r2_oracle() -> SetOracle {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        SetOracle::new(Arc::new(
            QuadraticR2::from_rows(&[vec![1.0, 0.0, s], vec![0.0, 1.0, s]], vec![3.0, 4.0])
                .unwrap(),
        ))
    }

    fn set(ids: &[usize]) -> SupportSet {
        SupportSet::from_iter(ids.iter().copied())
    }

    #[test]
    fn starts_from_best_singleton_and_stops() {
        let sys = IndependenceSystem::uniform_matroid(3, 1).unwrap();
        let mut oracle = r2_oracle();
        let cfg = RunConfig::new(Variant::Oblivious)
            .with_epsilon(0.1)
            .with_max_iterations(100);
        let report = geometric_local_search(&mut oracle, &sys, &cfg, None).unwrap();
        // Best singleton is {2} with f = 0.98; 0.64 < 1.03·0.98, so the
        // first pass finds nothing and the run stops with zero moves.
        assert_eq!(report.final_set, set(&[2]));
        assert!((report.final_value - 0.98).abs() < 1e-12);
        assert_eq!(report.iterations_used, 0);
        assert_eq!(report.stop_reason, StopReason::LocalOptimum);
    }

    #[test]
    fn epsilon_is_required_and_validated() {
        let sys = IndependenceSystem::uniform_matroid(3, 1).unwrap();
        let mut oracle = r2_oracle();
        let cfg = RunConfig::new(Variant::Oblivious);
        assert!(geometric_local_search(&mut oracle, &sys, &cfg, None).is_err());
        let cfg = RunConfig::new(Variant::Oblivious).with_epsilon(1.5);
        assert!(geometric_local_search(&mut oracle, &sys, &cfg, None).is_err());
    }

    #[test]
    fn takes_first_qualifying_swap_in_scan_order() {
        // Uniform s = 1 over four near-equal columns: from the best
        // singleton no swap qualifies; from a weak start the first
        // qualifying swap in (drop asc, add asc) order is taken.
        let obj = QuadraticR2::from_rows(
            &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.9, 0.8]],
            vec![1.0, 2.0],
        )
        .unwrap();
        let sys = IndependenceSystem::uniform_matroid(4, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(obj));
        let cfg = RunConfig::new(Variant::Oblivious)
            .with_epsilon(0.1)
            .with_max_iterations(100);
        let report = geometric_local_search(&mut oracle, &sys, &cfg, None).unwrap();
        // Singleton values: 0.2, 0.8, 0.648, 0.512 -> starts and stays at {1}.
        assert_eq!(report.final_set, set(&[1]));
    }

    #[test]
    fn zero_objective_does_not_cycle() {
        // y orthogonal to every column: f ≡ 0 and the absolute gain floor
        // must keep the search from accepting null moves.
        let obj = QuadraticR2::from_rows(
            &[vec![1.0, 1.0], vec![0.0, 0.0]],
            vec![0.0, 5.0],
        )
        .unwrap();
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(obj));
        let cfg = RunConfig::new(Variant::Oblivious)
            .with_epsilon(0.1)
            .with_max_iterations(50);
        let report = geometric_local_search(&mut oracle, &sys, &cfg, None).unwrap();
        assert_eq!(report.iterations_used, 0);
        assert_eq!(report.final_value, 0.0);
        assert_eq!(report.stop_reason, StopReason::LocalOptimum);
    }

    #[test]
    fn non_oblivious_threshold_uses_score() {
        let obj = QuadraticR2::from_rows(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![3.0, 4.0],
        )
        .unwrap();
        let constants = RestrictedConstants::exact_quadratic(&obj, &[1, 2], &[1, 2]).unwrap();
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(obj));
        let cfg = RunConfig::new(Variant::NonOblivious)
            .with_epsilon(0.1)
            .with_max_iterations(50);
        let report =
            geometric_local_search(&mut oracle, &sys, &cfg, Some(&constants)).unwrap();
        // Start = best singleton {1} already; score of swapping to {0} is
        // negative, so no move.
        assert_eq!(report.final_set, set(&[1]));
        assert_eq!(report.iterations_used, 0);
    }
}
