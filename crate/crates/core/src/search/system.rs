//! Anytime local search over q-reachable neighborhoods of p-matroid
//! intersections and p-exchange systems.

use itertools::Itertools;

use crate::constraints::{q_reachable_neighborhood, IndependenceSystem, NeighborhoodSpec};
use crate::error::{Error, Result};
use crate::objective::{RestrictedConstants, SetOracle};
use crate::search::score::{semi_oblivious_drop_map, ScoreContext};
use crate::search::{AlgorithmKind, Move, RunConfig, RunRecorder, RunReport, StopReason, Variant};
use crate::set::SupportSet;

/// Exchange size governing the smoothness constant for a p-system search
/// with radius `q`: `2p(q+1)` for matroid intersections, `pq + 1` for
/// exchange systems.
pub fn exchange_size(sys: &IndependenceSystem, q: usize) -> Result<usize> {
    let p = sys.p();
    match sys {
        IndependenceSystem::Matroid(_) => Err(Error::Config(
            "exchange size is defined for p >= 2 systems".into(),
        )),
        IndependenceSystem::Intersection { .. } => Ok(2 * p * (q + 1)),
        IndependenceSystem::BMatching { .. } => Ok(p * q + 1),
    }
}

/// Best-exchange local search for `p >= 2` systems: start from the empty
/// set and repeatedly move to the best feasible q-reachable solution under
/// the variant's rule, stopping when none qualifies.
///
/// Starting empty (rather than from a maximal extension) matters for the
/// non-oblivious variant: growth moves carry strictly positive scores under
/// any smoothness constant, while from an arbitrary maximal start a
/// conservative upper-bound constant can freeze the run at its initial
/// solution. The guarantees are start-independent.
pub fn system_local_search(
    oracle: &mut SetOracle,
    sys: &IndependenceSystem,
    cfg: &RunConfig,
    constants: Option<&RestrictedConstants>,
) -> Result<RunReport> {
    if sys.p() < 2 {
        return Err(Error::Config(
            "system local search requires a p >= 2 constraint; use the matroid driver".into(),
        ));
    }
    if cfg.max_iterations == 0 {
        return Err(Error::Config("iteration budget must be >= 1".into()));
    }
    let spec = NeighborhoodSpec::for_system(sys, cfg.q)?;
    let m_const = match cfg.variant {
        Variant::NonOblivious => {
            let t = exchange_size(sys, cfg.q)?;
            let constants = constants.ok_or_else(|| {
                Error::Config("non-oblivious variant needs restricted constants".into())
            })?;
            Some(
                constants
                    .smoothness(sys.rank().max(1), t)
                    .filter(|&m| m > 0.0)
                    .ok_or_else(|| {
                        Error::Config(format!("no smoothness constant for exchange size {t}"))
                    })?,
            )
        }
        _ => None,
    };

    let mut recorder = RunRecorder::new(AlgorithmKind::SystemAnytime, cfg.record_trajectory)
        .variant(cfg.variant)
        .q(cfg.q);
    if let Some(m) = m_const {
        recorder.constant_used(m);
    }

    let mut x = SupportSet::empty();

    match cfg.variant {
        Variant::Oblivious | Variant::SemiOblivious => {
            let solve = oracle.restricted_maximizer(&x)?;
            let mut f_x = solve.value;
            let mut w_x = solve.w;
            recorder.record(&x, f_x, None, oracle.counters());

            let mut stop = StopReason::Budget;
            for _ in 0..cfg.max_iterations {
                debug_assert!(sys.is_independent(&x)?);
                let mut best: Option<(f64, SupportSet, Vec<f64>)> = None;
                if cfg.variant == Variant::Oblivious {
                    for candidate in q_reachable_neighborhood(sys, &x, &spec)? {
                        let cand = oracle.restricted_maximizer(&candidate)?;
                        if best.as_ref().map_or(true, |(bv, ..)| cand.value > *bv) {
                            best = Some((cand.value, candidate, cand.w));
                        }
                    }
                } else {
                    // One evaluation per candidate add-set; pure drops cannot
                    // improve a monotone objective and are skipped.
                    let outside: Vec<usize> =
                        (0..sys.n()).filter(|e| !x.contains(*e)).collect();
                    for add_size in 1..=spec.add_cap.min(outside.len()) {
                        for add_ids in outside.iter().copied().combinations(add_size) {
                            let add = SupportSet::from_sorted(add_ids);
                            let Some(drop) =
                                semi_oblivious_drop_map(sys, &x, &add, &w_x, Some(&spec))?
                            else {
                                continue;
                            };
                            let candidate = x.difference(&drop).union(&add);
                            let cand = oracle.restricted_maximizer(&candidate)?;
                            if best.as_ref().map_or(true, |(bv, ..)| cand.value > *bv) {
                                best = Some((cand.value, candidate, cand.w));
                            }
                        }
                    }
                }
                match best {
                    Some((value, candidate, w)) if value - f_x > 0.0 => {
                        let step = Move {
                            dropped: x.difference(&candidate),
                            added: candidate.difference(&x),
                        };
                        x = candidate;
                        f_x = value;
                        w_x = w;
                        recorder.record(&x, f_x, Some(step), oracle.counters());
                    }
                    _ => {
                        stop = StopReason::LocalOptimum;
                        break;
                    }
                }
            }
            Ok(recorder.finish(x, f_x, stop, oracle.counters()))
        }
        Variant::NonOblivious => {
            let m = m_const.expect("checked above");
            let mut ctx = ScoreContext::at(oracle, &x, m)?;
            recorder.record(&x, ctx.value, None, oracle.counters());

            let mut stop = StopReason::Budget;
            for _ in 0..cfg.max_iterations {
                debug_assert!(sys.is_independent(&x)?);
                let mut best: Option<(f64, SupportSet)> = None;
                for candidate in q_reachable_neighborhood(sys, &x, &spec)? {
                    let score =
                        ctx.score(&x.difference(&candidate), &candidate.difference(&x));
                    if best.as_ref().map_or(true, |(bs, _)| score > *bs) {
                        best = Some((score, candidate));
                    }
                }
                match best {
                    Some((score, candidate)) if score > 0.0 => {
                        let step = Move {
                            dropped: x.difference(&candidate),
                            added: candidate.difference(&x),
                        };
                        x = candidate;
                        ctx = ScoreContext::at(oracle, &x, m)?;
                        recorder.record(&x, ctx.value, Some(step), oracle.counters());
                    }
                    _ => {
                        stop = StopReason::LocalOptimum;
                        break;
                    }
                }
            }
            Ok(recorder.finish(x, ctx.value, stop, oracle.counters()))
        }
    }
}
