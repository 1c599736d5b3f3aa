//! Surrogate scoring for the accelerated variants.
//!
//! The non-oblivious score of replacing `drop ⊆ X` with `add ∩ X = ∅` is
//!
//! `(1/2M) ||(∇u(w^(X)))_add||² - (M/2) ||(w^(X))_drop||²`
//!
//! a certified lower bound on the true gain `f(X △ (add ∪ drop)) - f(X)`
//! whenever `M` dominates the restricted smoothness constant at the
//! relevant exchange size. Both the maximizer and its gradient are computed
//! once per outer iteration and shared across all candidate scores.

use crate::constraints::{IndependenceSystem, NeighborhoodSpec};
use crate::error::{Error, Result};
use crate::objective::SetOracle;
use crate::set::SupportSet;
use itertools::Itertools;

/// Per-iteration cache: the restricted maximizer `w^(X)`, its gradient, and
/// the smoothness constant. Costs exactly one `f_call` and one `grad_call`.
pub struct ScoreContext {
    pub w: Vec<f64>,
    pub grad: Vec<f64>,
    /// `f(X) = u(w^(X))`, a free by-product of the solve.
    pub value: f64,
    pub m_const: f64,
}

impl ScoreContext {
    pub fn at(oracle: &mut SetOracle, x: &SupportSet, m_const: f64) -> Result<Self> {
        if m_const <= 0.0 {
            return Err(Error::Config(format!(
                "smoothness constant must be positive, got {m_const}"
            )));
        }
        let solve = oracle.restricted_maximizer(x)?;
        let grad = oracle.gradient(&solve.w)?;
        Ok(ScoreContext {
            w: solve.w,
            grad,
            value: solve.value,
            m_const,
        })
    }

    pub fn score(&self, drop: &SupportSet, add: &SupportSet) -> f64 {
        let gain: f64 = add.iter().map(|e| self.grad[e] * self.grad[e]).sum();
        let loss: f64 = drop.iter().map(|e| self.w[e] * self.w[e]).sum();
        gain / (2.0 * self.m_const) - self.m_const / 2.0 * loss
    }

    pub fn score_swap(&self, drop: usize, add: usize) -> f64 {
        self.grad[add] * self.grad[add] / (2.0 * self.m_const)
            - self.m_const / 2.0 * self.w[drop] * self.w[drop]
    }
}

/// One-shot non-oblivious score. `add` must be disjoint from `X` and `drop`
/// contained in it; `m_const` must be positive.
pub fn non_oblivious_score(
    oracle: &mut SetOracle,
    x: &SupportSet,
    drop: &SupportSet,
    add: &SupportSet,
    m_const: f64,
) -> Result<f64> {
    if !drop.is_subset_of(x) {
        return Err(Error::InfeasibleInput(format!("drop {drop} not inside {x}")));
    }
    if !add.is_disjoint_from(x) {
        return Err(Error::InfeasibleInput(format!(
            "add {add} intersects {x}"
        )));
    }
    let ctx = ScoreContext::at(oracle, x, m_const)?;
    Ok(ctx.score(drop, add))
}

/// The semi-oblivious drop rule.
///
/// For a single matroid, `add` must be a singleton and the result is the
/// feasible drop `{x}` minimizing `(w^(X))_x²` (ties to the smallest id).
/// For a p-system, the result is the drop set `T ⊆ X` minimizing
/// `||(w^(X))_T||²` such that `(X ∪ add) \ T` is feasible and within the
/// neighborhood caps (ties to the lexicographically smallest set).
///
/// Returns `None` when no feasible drop exists; the caller skips this add.
pub fn semi_oblivious_drop_map(
    sys: &IndependenceSystem,
    x: &SupportSet,
    add: &SupportSet,
    w: &[f64],
    spec: Option<&NeighborhoodSpec>,
) -> Result<Option<SupportSet>> {
    if !add.is_disjoint_from(x) {
        return Err(Error::InfeasibleInput(format!("add {add} intersects {x}")));
    }
    if sys.is_matroid() {
        let add_elem = match add.members() {
            &[e] => e,
            _ => {
                return Err(Error::Config(
                    "matroid drop rule expects a single added element".into(),
                ))
            }
        };
        let mut best: Option<(f64, usize)> = None;
        for drop in x.iter() {
            let candidate = x.without(drop).with(add_elem);
            if !sys.is_independent(&candidate)? {
                continue;
            }
            let weight = w[drop] * w[drop];
            if best.map_or(true, |(bw, _)| weight < bw) {
                best = Some((weight, drop));
            }
        }
        return Ok(best.map(|(_, drop)| SupportSet::singleton(drop)));
    }

    let spec = spec.ok_or_else(|| {
        Error::Config("p-system drop rule needs a neighborhood spec".into())
    })?;
    if add.len() > spec.add_cap {
        return Ok(None);
    }
    let inside: Vec<usize> = x.members().to_vec();
    let mut best: Option<(f64, SupportSet)> = None;
    for drop_size in 0..=spec.drop_cap.min(inside.len()) {
        for drop_ids in inside.iter().copied().combinations(drop_size) {
            let drop = SupportSet::from_sorted(drop_ids);
            let candidate = x.difference(&drop).union(add);
            if !sys.is_independent(&candidate)? {
                continue;
            }
            let weight: f64 = drop.iter().map(|e| w[e] * w[e]).sum();
            let better = match &best {
                None => true,
                Some((bw, bd)) => weight < *bw || (weight == *bw && drop < *bd),
            };
            if better {
                best = Some((weight, drop));
            }
        }
    }
    Ok(best.map(|(_, drop)| drop))
}
