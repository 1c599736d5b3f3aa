//! Empirical verification of the approximation machinery.
//!
//! Three layers of checks, all brute-force over small instances:
//!
//! * **localizability** — the summed-gain property that drives every bound:
//!   simplified form over size-s pairs and bijections, general form over
//!   bounded-multiplicity collections of exchange sets;
//! * **curvature inequalities** — the exchange-gain lower bound, the
//!   optimality-gap upper bound, and the best-singleton bound implied by
//!   restricted strong concavity and smoothness;
//! * **run certificates** — given a finished run and exact constants,
//!   asserts the matching guarantee against the brute-force optimum.
//!
//! Found violations are real; absence of violations is evidence within the
//! enumerated scope, not proof (collections are capped, see
//! [`GeneralCheckBudget`]).

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::baselines::brute_force_opt;
use crate::constraints::IndependenceSystem;
use crate::error::{Error, Result};
use crate::objective::{RestrictedConstants, SetOracle};
use crate::search::{exchange_size, AlgorithmKind, RunReport, StopReason};
use crate::set::SupportSet;

/// Default absolute tolerance for all set-level inequality checks.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Memoizing wrapper around a forked oracle: one restricted solve per
/// distinct support, one gradient per distinct maximizer.
struct Memo {
    oracle: SetOracle,
    solves: HashMap<SupportSet, (f64, Vec<f64>)>,
    grads: HashMap<SupportSet, Vec<f64>>,
}

impl Memo {
    fn new(oracle: &SetOracle) -> Self {
        Memo {
            oracle: oracle.fork(),
            solves: HashMap::new(),
            grads: HashMap::new(),
        }
    }

    fn value(&mut self, x: &SupportSet) -> Result<f64> {
        Ok(self.solve(x)?.0)
    }

    fn solve(&mut self, x: &SupportSet) -> Result<(f64, Vec<f64>)> {
        if let Some(hit) = self.solves.get(x) {
            return Ok(hit.clone());
        }
        let solve = self.oracle.restricted_maximizer(x)?;
        let entry = (solve.value, solve.w);
        self.solves.insert(x.clone(), entry.clone());
        Ok(entry)
    }

    fn grad_at_maximizer(&mut self, x: &SupportSet) -> Result<Vec<f64>> {
        if let Some(hit) = self.grads.get(x) {
            return Ok(hit.clone());
        }
        let (_, w) = self.solve(x)?;
        let g = self.oracle.grad_u(&w)?;
        self.grads.insert(x.clone(), g.clone());
        Ok(g)
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<SupportSet> {
    (0..n)
        .combinations(k)
        .map(SupportSet::from_sorted)
        .collect()
}

fn all_subsets(n: usize) -> Vec<SupportSet> {
    (0..(1u64 << n))
        .map(|mask| SupportSet::from_iter((0..n).filter(|i| mask >> i & 1 == 1)))
        .collect()
}

/// Outcome of a localizability check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizabilityReport {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub size: usize,
    pub exchange_size: Option<usize>,
    /// Minimum of LHS − RHS over every enumerated configuration.
    pub worst_slack: f64,
    pub witness: Option<String>,
    pub configs_checked: u64,
    /// Set when an enumeration budget truncated the scan.
    pub partial: bool,
    pub tol: f64,
}

impl LocalizabilityReport {
    pub fn passed(&self) -> bool {
        self.worst_slack >= -self.tol
    }
}

/// Checks the simplified localizability property: for every pair of size-s
/// sets `X, X*` and every bijection `φ: X\X* -> X*\X`,
///
/// `Σ_x [f(X - x + φ(x)) - f(X)] >= α f(X*) - β f(X) - tol`.
pub fn check_localizability_simplified(
    oracle: &SetOracle,
    s: usize,
    alpha: f64,
    beta: f64,
    n_limit: usize,
    tol: f64,
) -> Result<LocalizabilityReport> {
    let n = oracle.dim();
    if n > n_limit {
        return Err(Error::TooLarge(format!(
            "simplified localizability check limited to n <= {n_limit}, got {n}"
        )));
    }
    if s > 4 || s > n {
        return Err(Error::Config(format!(
            "size {s} out of range for the simplified check (s <= 4, s <= n)"
        )));
    }
    let mut memo = Memo::new(oracle);
    let sets = subsets_of_size(n, s);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut configs = 0u64;

    for x in &sets {
        let f_x = memo.value(x)?;
        for x_star in &sets {
            let f_star = memo.value(x_star)?;
            let rhs = alpha * f_star - beta * f_x;
            let outgoing: Vec<usize> = x.difference(x_star).members().to_vec();
            let incoming: Vec<usize> = x_star.difference(x).members().to_vec();
            debug_assert_eq!(outgoing.len(), incoming.len());
            if outgoing.is_empty() {
                // X = X*: the empty bijection; LHS is 0.
                configs += 1;
                let slack = 0.0 - rhs;
                if slack < worst {
                    worst = slack;
                    witness = Some(format!("X = X* = {x}"));
                }
                continue;
            }
            for image in incoming.iter().copied().permutations(incoming.len()) {
                configs += 1;
                let mut lhs = 0.0;
                for (&drop, &add) in outgoing.iter().zip(&image) {
                    lhs += memo.value(&x.without(drop).with(add))? - f_x;
                }
                let slack = lhs - rhs;
                if slack < worst {
                    worst = slack;
                    witness = Some(format!("X = {x}, X* = {x_star}, image {image:?}"));
                }
            }
        }
    }
    Ok(LocalizabilityReport {
        alpha,
        beta1: beta,
        beta2: 0.0,
        size: s,
        exchange_size: None,
        worst_slack: worst,
        witness,
        configs_checked: configs,
        partial: false,
        tol,
    })
}

/// Enumeration budget for the general localizability check.
#[derive(Debug, Clone, Copy)]
pub struct GeneralCheckBudget {
    /// Cap on the number of sets per collection (counting multiplicity);
    /// `None` uses the symmetric-difference size.
    pub max_sets: Option<usize>,
    /// Global cap on enumerated collections per (X, X*) pair.
    pub max_collections: u64,
}

impl Default for GeneralCheckBudget {
    fn default() -> Self {
        GeneralCheckBudget {
            max_sets: None,
            max_collections: 200_000,
        }
    }
}

/// Checks the general localizability property over collections of subsets
/// of `X △ X*` with per-set size at most `t` and multiplicity at most 2:
///
/// `Σ_{P} [f(X △ P) - f(X)] >= α k f(X*) - (β₁ ℓ + β₂ k) f(X) - tol`
///
/// with `k` the minimum multiplicity over incoming elements and `ℓ` the
/// maximum over outgoing ones. Collections leaving an incoming element
/// uncovered have no valid `k` and are skipped, as are those with `k > ℓ`,
/// which fall outside the exchange-structure regime the guarantees use
/// (there every incoming element appears `qη` times and outgoing ones at
/// most `(pq-q+1)η >= qη` times).
pub fn check_localizability_general(
    oracle: &SetOracle,
    s: usize,
    t: usize,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    n_limit: usize,
    tol: f64,
    budget: GeneralCheckBudget,
) -> Result<LocalizabilityReport> {
    let n = oracle.dim();
    if n > n_limit.min(6) {
        return Err(Error::TooLarge(format!(
            "general localizability check limited to n <= {}, got {n}",
            n_limit.min(6)
        )));
    }
    if s > 3 || t > 3 || s == 0 || t == 0 {
        return Err(Error::Config(
            "general check supports 1 <= s <= 3, 1 <= t <= 3".into(),
        ));
    }
    let mut memo = Memo::new(oracle);
    let mut sets = Vec::new();
    for k in 0..=s.min(n) {
        sets.extend(subsets_of_size(n, k));
    }
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut configs = 0u64;
    let mut partial = false;

    for x in &sets {
        let f_x = memo.value(x)?;
        for x_star in &sets {
            let incoming = x_star.difference(x);
            if incoming.is_empty() {
                continue; // no valid positive k
            }
            let f_star = memo.value(x_star)?;
            let outgoing = x.difference(x_star);
            let diff = x.symmetric_difference(x_star);
            let mut pieces: Vec<SupportSet> = Vec::new();
            for k in 1..=t.min(diff.len()) {
                for ids in diff.iter().combinations(k) {
                    pieces.push(SupportSet::from_iter(ids));
                }
            }
            // Gain of applying each piece once, and its element incidence.
            let mut gains = Vec::with_capacity(pieces.len());
            for p in &pieces {
                gains.push(memo.value(&x.symmetric_difference(p))? - f_x);
            }
            let max_sets = budget.max_sets.unwrap_or(diff.len().max(2));
            let mut state = CollectionScan {
                memo_gains: &gains,
                pieces: &pieces,
                incoming: &incoming,
                outgoing: &outgoing,
                alpha,
                beta1,
                beta2,
                f_x,
                f_star,
                max_sets,
                remaining: budget.max_collections,
                configs: 0,
                worst: f64::INFINITY,
                worst_detail: None,
            };
            state.scan(0, 0, 0.0, &mut vec![0u8; pieces.len()]);
            configs += state.configs;
            if state.remaining == 0 {
                partial = true;
            }
            if state.worst < worst {
                worst = state.worst;
                witness = state
                    .worst_detail
                    .map(|d| format!("X = {x}, X* = {x_star}, {d}"));
            }
        }
    }
    Ok(LocalizabilityReport {
        alpha,
        beta1,
        beta2,
        size: s,
        exchange_size: Some(t),
        worst_slack: worst,
        witness,
        configs_checked: configs,
        partial,
        tol,
    })
}

struct CollectionScan<'a> {
    memo_gains: &'a [f64],
    pieces: &'a [SupportSet],
    incoming: &'a SupportSet,
    outgoing: &'a SupportSet,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    f_x: f64,
    f_star: f64,
    max_sets: usize,
    remaining: u64,
    configs: u64,
    worst: f64,
    worst_detail: Option<String>,
}

impl CollectionScan<'_> {
    /// DFS over multiplicity vectors (0, 1, or 2 per piece).
    fn scan(&mut self, index: usize, used: usize, lhs: f64, mults: &mut Vec<u8>) {
        if self.remaining == 0 {
            return;
        }
        if index == self.pieces.len() {
            self.evaluate(lhs, mults);
            return;
        }
        for mult in 0..=2u8 {
            if used + mult as usize > self.max_sets {
                break;
            }
            mults[index] = mult;
            self.scan(
                index + 1,
                used + mult as usize,
                lhs + mult as f64 * self.memo_gains[index],
                mults,
            );
            if self.remaining == 0 {
                return;
            }
        }
        mults[index] = 0;
    }

    fn evaluate(&mut self, lhs: f64, mults: &[u8]) {
        if mults.iter().all(|&m| m == 0) {
            return;
        }
        self.remaining -= 1;
        let count = |e: usize| -> u32 {
            self.pieces
                .iter()
                .zip(mults)
                .filter(|(p, &m)| m > 0 && p.contains(e))
                .map(|(_, &m)| m as u32)
                .sum()
        };
        let k = self.incoming.iter().map(count).min().unwrap_or(0);
        if k == 0 {
            return; // some incoming element uncovered: no valid k
        }
        let l = self.outgoing.iter().map(count).max().unwrap_or(0).max(1);
        if k > l {
            return; // outside the exchange-structure regime
        }
        self.configs += 1;
        let rhs = self.alpha * k as f64 * self.f_star
            - (self.beta1 * l as f64 + self.beta2 * k as f64) * self.f_x;
        let slack = lhs - rhs;
        if slack < self.worst {
            self.worst = slack;
            self.worst_detail = Some(format!("multiplicities {mults:?}, k = {k}, l = {l}"));
        }
    }
}

/// Worst slacks of the three curvature inequalities over all subset pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    /// `f(X') - f(X) >= (1/2M)||g_{X'\X}||² - (M/2)||w_{X\X'}||²`.
    pub exchange_lower_bound_slack: f64,
    /// `f(X*) - f(X) <= (1/2m)||g_{X*\X}||² - (m/2)||w_{X\X*}||²`.
    pub optimal_gap_upper_bound_slack: f64,
    /// `max_x f({x}) >= (m_s / (s M₁)) f(X)` for every feasible `X`.
    pub best_singleton_slack: f64,
    pub pairs_checked: u64,
    pub tol: f64,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.exchange_lower_bound_slack >= -self.tol
            && self.optimal_gap_upper_bound_slack >= -self.tol
            && self.best_singleton_slack >= -self.tol
    }
}

/// Verifies the smoothness lower bound and concavity upper bound over all
/// subset pairs, and the best-singleton bound over all feasible sets.
pub fn check_curvature_inequalities(
    oracle: &SetOracle,
    sys: &IndependenceSystem,
    constants: &RestrictedConstants,
    n_limit: usize,
    tol: f64,
) -> Result<InequalityReport> {
    let n = oracle.dim();
    if n > n_limit {
        return Err(Error::TooLarge(format!(
            "inequality check limited to n <= {n_limit}, got {n}"
        )));
    }
    let mut memo = Memo::new(oracle);
    let subsets = all_subsets(n);
    let mut exchange_slack = f64::INFINITY;
    let mut gap_slack = f64::INFINITY;
    let mut pairs = 0u64;

    for x in &subsets {
        let f_x = memo.value(x)?;
        let (_, w) = memo.solve(x)?;
        let g = memo.grad_at_maximizer(x)?;
        for other in &subsets {
            pairs += 1;
            let f_other = memo.value(other)?;
            let s = x.len().max(other.len()).max(1);
            let t = x.symmetric_difference(other).len();
            let grad_term: f64 = other
                .difference(x)
                .iter()
                .map(|e| g[e] * g[e])
                .sum();
            let weight_term: f64 = x
                .difference(other)
                .iter()
                .map(|e| w[e] * w[e])
                .sum();
            if t > 0 {
                if let Some(m_big) = constants.smoothness(s, t).filter(|&v| v > 0.0) {
                    let lower = grad_term / (2.0 * m_big) - m_big / 2.0 * weight_term;
                    exchange_slack = exchange_slack.min(f_other - f_x - lower);
                }
            } else {
                exchange_slack = exchange_slack.min(0.0);
            }
            if let Some(m) = constants.concavity(2 * s).filter(|&v| v > 1e-12) {
                let upper = grad_term / (2.0 * m) - m / 2.0 * weight_term;
                gap_slack = gap_slack.min(upper - (f_other - f_x));
            }
        }
    }

    // Best-singleton bound over feasible sets.
    let mut best_singleton = 0.0f64;
    for e in 0..n {
        best_singleton = best_singleton.max(memo.value(&SupportSet::singleton(e))?);
    }
    let s_rank = sys.rank().max(1);
    let mut singleton_slack = f64::INFINITY;
    match (
        constants.concavity(s_rank),
        constants.smoothness(1, 1).filter(|&v| v > 0.0),
    ) {
        (Some(m_s), Some(m1)) => {
            let factor = m_s / (s_rank as f64 * m1);
            for x in &subsets {
                if !sys.is_independent(x)? {
                    continue;
                }
                let f_x = memo.value(x)?;
                singleton_slack = singleton_slack.min(best_singleton - factor * f_x);
            }
        }
        _ => singleton_slack = 0.0, // vacuous without constants
    }

    Ok(InequalityReport {
        exchange_lower_bound_slack: exchange_slack,
        optimal_gap_upper_bound_slack: gap_slack,
        best_singleton_slack: singleton_slack,
        pairs_checked: pairs,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    Pass,
    Fail,
    /// Constants (or an applicable guarantee) are missing.
    Unverifiable,
}

/// Machine-readable record of one verified guarantee.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    /// Which guarantee was checked, e.g. `matroid-local-optimum`.
    pub guarantee: String,
    pub status: CertificateStatus,
    /// Required fraction of the optimum.
    pub bound: Option<f64>,
    pub opt_value: Option<f64>,
    pub achieved_value: f64,
    pub achieved_ratio: Option<f64>,
    /// Geometric runs: maximum admissible number of accepted moves.
    pub iteration_cap: Option<usize>,
    pub iterations_used: usize,
    pub concavity_used: Option<f64>,
    pub smoothness_used: Option<f64>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Verifies the guarantee matching a finished run against the brute-force
/// optimum. Returns `None` for algorithms without a certified bound
/// (greedy, random selection).
pub fn certify_run(
    report: &RunReport,
    oracle: &SetOracle,
    sys: &IndependenceSystem,
    constants: Option<&RestrictedConstants>,
    tol: f64,
) -> Result<Option<Certificate>> {
    let rank = sys.rank().max(1);
    let guarantee = match (report.algorithm, report.stop_reason) {
        (AlgorithmKind::Greedy, _) | (AlgorithmKind::RandomSelection, _) => return Ok(None),
        (AlgorithmKind::MatroidAnytime, StopReason::LocalOptimum) => "matroid-local-optimum",
        (AlgorithmKind::MatroidAnytime, StopReason::Budget) => "matroid-iteration-budget",
        (AlgorithmKind::SystemAnytime, StopReason::LocalOptimum) => "system-local-optimum",
        (AlgorithmKind::SystemAnytime, StopReason::Budget) => "system-iteration-budget",
        (AlgorithmKind::MatroidGeometric, _) => "geometric-improvement",
        (AlgorithmKind::ModularApproximation, _) => "modular-approximation",
    };

    let mut scratch = oracle.fork();
    let (_, opt) = brute_force_opt(&mut scratch, sys)?;

    let unverifiable = |why: &str| Certificate {
        guarantee: guarantee.to_string(),
        status: CertificateStatus::Unverifiable,
        bound: None,
        opt_value: Some(opt),
        achieved_value: report.final_value,
        achieved_ratio: if opt > tol {
            Some(report.final_value / opt)
        } else {
            None
        },
        iteration_cap: None,
        iterations_used: report.iterations_used,
        concavity_used: None,
        smoothness_used: None,
        tol,
        detail: Some(why.to_string()),
    };

    let Some(constants) = constants else {
        return Ok(Some(unverifiable("no constants supplied")));
    };

    let t_exchange = match report.algorithm {
        AlgorithmKind::SystemAnytime => {
            exchange_size(sys, report.q.unwrap_or(1)).unwrap_or(2 * rank)
        }
        _ => 2,
    };
    let m_small = constants.concavity(2 * rank);
    let m_big = constants.smoothness(rank, t_exchange).filter(|&v| v > 0.0);
    let (Some(m), Some(big_m)) = (m_small, m_big) else {
        return Ok(Some(unverifiable("constants missing for this exchange size")));
    };

    let ratio_budget_factor = |rate: f64, t_iters: usize| -> f64 {
        // 1 - exp(-rate · M · T / (s · m)); zero concavity collapses the
        // bound to zero.
        if m <= 0.0 {
            return 0.0;
        }
        1.0 - (-rate * big_m * t_iters as f64 / (rank as f64 * m)).exp()
    };

    let mut iteration_cap = None;
    let bound = match report.algorithm {
        AlgorithmKind::MatroidAnytime => {
            let base = (m / big_m).powi(2);
            match report.stop_reason {
                StopReason::LocalOptimum => base,
                StopReason::Budget => base * ratio_budget_factor(1.0, report.iterations_used),
            }
        }
        AlgorithmKind::SystemAnytime => {
            let p = sys.p() as f64;
            let q = report.q.unwrap_or(1) as f64;
            let rate = p - 1.0 + 1.0 / q;
            let base = (m / big_m).powi(2) / rate;
            match report.stop_reason {
                StopReason::LocalOptimum => base,
                StopReason::Budget => {
                    (m / big_m).powi(2) / rate
                        * ratio_budget_factor(rate, report.iterations_used)
                }
            }
        }
        AlgorithmKind::MatroidGeometric => {
            let epsilon = report
                .epsilon
                .ok_or_else(|| Error::InvalidData("geometric report without epsilon".into()))?;
            // Accepted moves each multiply the value by at least 1 + ε/n,
            // starting from a best-singleton solution.
            let delta = epsilon / sys.n() as f64;
            let m_s = constants.concavity(rank);
            let m1 = constants.smoothness(1, 1).filter(|&v| v > 0.0);
            if let (Some(m_s), Some(m1)) = (m_s, m1) {
                if m_s > 1e-12 {
                    let cap = ((rank as f64 * m1 / m_s).ln() / (1.0 + delta).ln()).ceil();
                    iteration_cap = Some(cap.max(0.0) as usize);
                }
            }
            if report.stop_reason == StopReason::Budget {
                return Ok(Some(unverifiable(
                    "geometric run stopped on budget; stationarity bound does not apply",
                )));
            }
            ((m / big_m).powi(2) - epsilon).max(0.0)
        }
        AlgorithmKind::ModularApproximation => {
            let m1 = constants.concavity(1);
            let big_m1 = constants.smoothness(1, 1).filter(|&v| v > 0.0);
            let m_s = constants.concavity(rank);
            let big_m_s = constants.smoothness(rank, rank).filter(|&v| v > 0.0);
            let (Some(m1), Some(big_m1), Some(m_s), Some(big_m_s)) =
                (m1, big_m1, m_s, big_m_s)
            else {
                return Ok(Some(unverifiable("constants missing for modular bound")));
            };
            let factor = if sys.is_matroid() {
                1.0
            } else {
                let p = sys.p() as f64;
                let q = report.q.unwrap_or(1) as f64;
                1.0 / (p - 1.0 + 1.0 / q)
            };
            factor * (m1 * m_s) / (big_m1 * big_m_s)
        }
        _ => unreachable!(),
    };

    let value_ok = report.final_value >= bound * opt - tol;
    let iters_ok = iteration_cap.map_or(true, |cap| report.iterations_used <= cap);
    let status = if value_ok && iters_ok {
        CertificateStatus::Pass
    } else {
        CertificateStatus::Fail
    };
    Ok(Some(Certificate {
        guarantee: guarantee.to_string(),
        status,
        bound: Some(bound),
        opt_value: Some(opt),
        achieved_value: report.final_value,
        achieved_ratio: if opt > tol {
            Some(report.final_value / opt)
        } else {
            None
        },
        iteration_cap,
        iterations_used: report.iterations_used,
        concavity_used: Some(m),
        smoothness_used: Some(big_m),
        tol,
        detail: None,
    }))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::objective::QuadraticR2;
    use crate::search::{matroid_local_search, RunConfig, Variant};

    fn r1() -> QuadraticR2 {
        QuadraticR2::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]], vec![3.0, 4.0]).unwrap()
    }

    /// Diagonal design with orthogonal columns: f is linear (modular).
    fn linear4() -> QuadraticR2 {
        QuadraticR2::from_rows(
            &[
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
            ],
            vec![1.0, 2.0, -1.0, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn simplified_slack_zero_on_r1_with_unit_constants() {
        // m = M = 0.08, so α = β = 1 and every swap inequality is tight.
        let oracle = SetOracle::new(Arc::new(r1()));
        let report =
            check_localizability_simplified(&oracle, 1, 1.0, 1.0, 8, DEFAULT_TOL).unwrap();
        assert!(report.passed());
        assert!(report.worst_slack.abs() < 1e-12, "slack {}", report.worst_slack);
    }

    #[test]
    fn simplified_with_exact_ratio_constants_passes() {
        let obj = r1();
        let constants = RestrictedConstants::exact_quadratic(&obj, &[1, 2], &[2]).unwrap();
        let alpha = constants.concavity(2).unwrap() / constants.smoothness(1, 2).unwrap();
        let beta = 1.0 / alpha;
        let oracle = SetOracle::new(Arc::new(obj));
        let report =
            check_localizability_simplified(&oracle, 1, alpha, beta, 8, DEFAULT_TOL).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn simplified_is_monotone_in_alpha() {
        let oracle = SetOracle::new(Arc::new(r1()));
        let strict =
            check_localizability_simplified(&oracle, 1, 1.0, 1.0, 8, DEFAULT_TOL).unwrap();
        let relaxed =
            check_localizability_simplified(&oracle, 1, 0.5, 1.0, 8, DEFAULT_TOL).unwrap();
        assert!(relaxed.worst_slack >= strict.worst_slack - 1e-15);
        assert!(strict.passed() && relaxed.passed());
    }

    #[test]
    fn simplified_detects_violations() {
        // α far above 1 cannot hold: swapping gains cannot beat 10·f(X*).
        let oracle = SetOracle::new(Arc::new(r1()));
        let report =
            check_localizability_simplified(&oracle, 1, 10.0, 0.0, 8, DEFAULT_TOL).unwrap();
        assert!(!report.passed());
        assert!(report.witness.is_some());
    }

    #[test]
    fn general_check_linear_is_one_one_zero_localizable() {
        let oracle = SetOracle::new(Arc::new(linear4()));
        let report = check_localizability_general(
            &oracle,
            2,
            2,
            1.0,
            1.0,
            0.0,
            6,
            DEFAULT_TOL,
            GeneralCheckBudget::default(),
        )
        .unwrap();
        assert!(report.passed(), "worst slack {}", report.worst_slack);
        assert!(!report.partial);
        assert!(report.configs_checked > 0);
    }

    #[test]
    fn general_check_quadratic_with_exact_constants() {
        let obj = r1();
        let constants = RestrictedConstants::exact_quadratic(&obj, &[1, 2, 4], &[1, 2]).unwrap();
        let alpha = constants.concavity(4).unwrap() / constants.smoothness(2, 2).unwrap();
        let beta1 = 1.0 / alpha;
        let oracle = SetOracle::new(Arc::new(obj));
        let report = check_localizability_general(
            &oracle,
            2,
            2,
            alpha,
            beta1,
            0.0,
            6,
            DEFAULT_TOL,
            GeneralCheckBudget::default(),
        )
        .unwrap();
        assert!(report.passed(), "worst slack {}", report.worst_slack);
    }

    #[test]
    fn general_check_reduces_to_simplified_on_singleton_collections() {
        // With max_sets = 1 only single-piece collections are scanned;
        // pieces of size 2 with one incoming and one outgoing element are
        // exactly the simplified swaps with k = l = 1.
        let oracle = SetOracle::new(Arc::new(r1()));
        let general = check_localizability_general(
            &oracle,
            1,
            2,
            1.0,
            1.0,
            0.0,
            6,
            DEFAULT_TOL,
            GeneralCheckBudget {
                max_sets: Some(1),
                max_collections: 10_000,
            },
        )
        .unwrap();
        assert!(general.passed());
    }

    #[test]
    fn curvature_inequalities_hold_on_r1() {
        let obj = r1();
        let constants =
            RestrictedConstants::exact_quadratic(&obj, &[1, 2, 3, 4], &[1, 2]).unwrap();
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let oracle = SetOracle::new(Arc::new(obj));
        let report =
            check_curvature_inequalities(&oracle, &sys, &constants, 8, DEFAULT_TOL).unwrap();
        assert!(report.passed(), "{report:?}");
        // The gap bound is tight at X = ∅, X* = {0,1}.
        assert!(report.optimal_gap_upper_bound_slack.abs() < 1e-9);
        // Best singleton bound is tight for s = 1 with m₁ = M₁.
        assert!(report.best_singleton_slack.abs() < 1e-9);
    }

    #[test]
    fn certificate_on_non_oblivious_r1_is_tight() {
        let obj = r1();
        let constants = RestrictedConstants::exact_quadratic(&obj, &[1, 2], &[2]).unwrap();
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(obj));
        let cfg = RunConfig::new(Variant::NonOblivious).with_max_iterations(10);
        let report = matroid_local_search(&mut oracle, &sys, &cfg, Some(&constants)).unwrap();
        let cert = certify_run(&report, &oracle, &sys, Some(&constants), DEFAULT_TOL)
            .unwrap()
            .unwrap();
        assert_eq!(cert.status, CertificateStatus::Pass);
        // m = M here, so the bound is exactly 1 and the run reaches OPT.
        assert!((cert.bound.unwrap() - 1.0).abs() < 1e-12);
        assert!((cert.achieved_ratio.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certificate_without_constants_is_unverifiable() {
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(r1()));
        let cfg = RunConfig::new(Variant::Oblivious).with_max_iterations(10);
        let report = matroid_local_search(&mut oracle, &sys, &cfg, None).unwrap();
        let cert = certify_run(&report, &oracle, &sys, None, DEFAULT_TOL)
            .unwrap()
            .unwrap();
        assert_eq!(cert.status, CertificateStatus::Unverifiable);
    }

    #[test]
    fn greedy_has_no_certificate() {
        let sys = IndependenceSystem::uniform_matroid(2, 1).unwrap();
        let mut oracle = SetOracle::new(Arc::new(r1()));
        let report = crate::baselines::greedy(&mut oracle, &sys).unwrap();
        assert!(certify_run(&report, &oracle, &sys, None, DEFAULT_TOL)
            .unwrap()
            .is_none());
    }
}
