//! Restricted strong-concavity and smoothness constants.
//!
//! For a quadratic objective with scaled Hessian `H = 2AᵀA/||y||²`, the
//! strong-concavity constant over `s`-sparse directions is the minimum
//! eigenvalue over principal submatrices of order `s`, and the smoothness
//! constant over difference-sparsity `t` is the corresponding maximum
//! eigenvalue; eigenvalue interlacing makes the exact-size enumeration
//! sufficient. Non-quadratic objectives get sampled estimates or the cheap
//! norm-cube upper bound.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{IsingPll, Objective, QuadraticR2};

/// How the stored constants were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantsProvenance {
    /// Eigenvalue enumeration; both maps are tight.
    Exact,
    /// Empirical extrema of the curvature quotient over random sparse pairs;
    /// concavity entries are over-estimates and smoothness entries
    /// under-estimates of the true constants.
    Sampled,
    /// Smoothness entries are a closed-form upper bound; no concavity
    /// entries.
    UpperBound,
}

/// Maps `s -> m_s` (restricted strong concavity) and `(s, t) -> M_{s,t}`
/// (restricted smoothness).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictedConstants {
    n: usize,
    m: BTreeMap<usize, f64>,
    big_m: BTreeMap<(usize, usize), f64>,
    pub provenance: ConstantsProvenance,
}

impl RestrictedConstants {
    /// Exact constants for a quadratic objective; feasible for `n <= 20`.
    /// `m_list` are the sparsity levels for concavity entries, `t_list` the
    /// difference sparsities for smoothness entries (stored for every
    /// requested `s`, although the quadratic value depends on `t` alone).
    pub fn exact_quadratic(
        obj: &QuadraticR2,
        m_list: &[usize],
        t_list: &[usize],
    ) -> Result<Self> {
        let n = obj.dim();
        if n > 20 {
            return Err(Error::TooLarge(
                "exact constants limited to n <= 20".into(),
            ));
        }
        let h = obj.scaled_hessian();
        let mut m = BTreeMap::new();
        for &s in m_list {
            if s == 0 {
                continue;
            }
            let k = s.min(n);
            m.insert(s, extremal_submatrix_eigenvalue(&h, k, false));
        }
        let mut big_m = BTreeMap::new();
        let mut by_t: BTreeMap<usize, f64> = BTreeMap::new();
        for &t in t_list {
            if t == 0 {
                continue;
            }
            let k = t.min(n);
            by_t.entry(t)
                .or_insert_with(|| extremal_submatrix_eigenvalue(&h, k, true));
        }
        // The quadratic smoothness constant depends on t alone; storing each
        // value under s = n as well makes every s <= n resolvable.
        let mut s_keys: Vec<usize> = m_list.iter().copied().filter(|&s| s > 0).collect();
        s_keys.push(n);
        s_keys.sort_unstable();
        s_keys.dedup();
        for (&t, &val) in &by_t {
            for &s in &s_keys {
                big_m.insert((s, t), val);
            }
        }
        Ok(RestrictedConstants {
            n,
            m,
            big_m,
            provenance: ConstantsProvenance::Exact,
        })
    }

    /// Empirical estimates of the curvature quotient
    /// `-2 (u(y) - u(x) - <∇u(x), y - x>) / ||y - x||²`
    /// over seeded random sparse pairs. Lower/upper envelopes only; flagged.
    pub fn sampled(
        obj: &dyn Objective,
        m_list: &[usize],
        t_list: &[usize],
        samples_per_entry: usize,
        seed: u64,
    ) -> Self {
        let n = obj.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = BTreeMap::new();
        for &s in m_list {
            if s == 0 {
                continue;
            }
            let mut lo = f64::INFINITY;
            for _ in 0..samples_per_entry {
                let q = sample_quotient(obj, s.min(n), s.min(n), &mut rng);
                lo = lo.min(q);
            }
            m.insert(s, lo.max(0.0));
        }
        let mut big_m = BTreeMap::new();
        for &s in m_list {
            for &t in t_list {
                if s == 0 || t == 0 {
                    continue;
                }
                let mut hi = 0.0f64;
                for _ in 0..samples_per_entry {
                    let q = sample_quotient(obj, s.min(n), t.min(s).min(n), &mut rng);
                    hi = hi.max(q);
                }
                big_m.insert((s, t), hi);
            }
        }
        RestrictedConstants {
            n,
            m,
            big_m,
            provenance: ConstantsProvenance::Sampled,
        }
    }

    /// The norm-cube smoothness upper bound for Ising pseudo-log-likelihood,
    /// filled for every requested `(s, t)`. No concavity entries.
    pub fn ising_upper_bound(obj: &IsingPll, s_list: &[usize], t_list: &[usize]) -> Self {
        let bound = obj.smoothness_upper_bound();
        let mut big_m = BTreeMap::new();
        for &s in s_list {
            for &t in t_list {
                if s == 0 || t == 0 {
                    continue;
                }
                big_m.insert((s, t), bound);
            }
        }
        RestrictedConstants {
            n: obj.dim(),
            m: BTreeMap::new(),
            big_m,
            provenance: ConstantsProvenance::UpperBound,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m_s`. Sparsity saturates at `n`; when the exact level is absent the
    /// next larger stored level is returned (a valid lower bound, since
    /// `m` is non-increasing in `s`).
    pub fn concavity(&self, s: usize) -> Option<f64> {
        let s = s.min(self.n).max(1);
        self.m
            .get(&s)
            .or_else(|| self.m.range(s..).next().map(|(_, v)| v))
            .copied()
    }

    /// `M_{s,t}`. Both indices saturate at `n`; absent entries fall back to
    /// the next larger stored `(s, t)` (a valid upper bound, since `M` is
    /// non-decreasing in each index).
    pub fn smoothness(&self, s: usize, t: usize) -> Option<f64> {
        let s = s.min(self.n).max(1);
        let t = t.min(self.n).max(1);
        if let Some(v) = self.big_m.get(&(s, t)) {
            return Some(*v);
        }
        self.big_m
            .iter()
            .filter(|((ks, kt), _)| *ks >= s && *kt >= t)
            .map(|(_, v)| *v)
            .next()
    }

    pub fn concavity_entries(&self) -> &BTreeMap<usize, f64> {
        &self.m
    }

    pub fn smoothness_entries(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.big_m
    }

    /// Structural sanity: `m` non-increasing in `s`, `M` non-decreasing in
    /// `t` at fixed `s`, and `m_s <= M_{s,t}` on comparable domains.
    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<(usize, f64)> = None;
        for (&s, &v) in &self.m {
            if let Some((ps, pv)) = prev {
                if v > pv + 1e-12 {
                    return Err(Error::InvalidData(format!(
                        "m_{s} = {v} exceeds m_{ps} = {pv}"
                    )));
                }
            }
            prev = Some((s, v));
        }
        let mut last: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
        for (&(s, t), &v) in &self.big_m {
            if let Some(&(pt, pv)) = last.get(&s) {
                if v < pv - 1e-12 {
                    return Err(Error::InvalidData(format!(
                        "M_({s},{t}) = {v} below M_({s},{pt}) = {pv}"
                    )));
                }
            }
            last.insert(s, (t, v));
        }
        for (&s, &ms) in &self.m {
            for t in 1..=s {
                if let Some(mst) = self.big_m.get(&(s, t)) {
                    if ms > mst + 1e-9 {
                        return Err(Error::InvalidData(format!(
                            "m_{s} = {ms} exceeds M_({s},{t}) = {mst}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Minimum (or maximum) eigenvalue over all principal submatrices of order
/// exactly `k`. Tiny negative eigenvalues of PSD matrices are clamped to 0.
fn extremal_submatrix_eigenvalue(h: &DMatrix<f64>, k: usize, maximize: bool) -> f64 {
    let n = h.nrows();
    let mut best = if maximize {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    for subset in (0..n).combinations(k) {
        let sub = DMatrix::from_fn(k, k, |i, j| h[(subset[i], subset[j])]);
        let eig = SymmetricEigen::new(sub);
        for &lambda in eig.eigenvalues.iter() {
            if maximize {
                best = best.max(lambda);
            } else {
                best = best.min(lambda);
            }
        }
    }
    if !maximize && best.abs() < 1e-12 {
        best = best.max(0.0);
    }
    best.max(0.0)
}

/// One random pair (x, y) with both supports inside a random set of size
/// `s_support` and a difference of at most `d_support` coordinates.
fn sample_quotient(
    obj: &dyn Objective,
    s_support: usize,
    d_support: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let n = obj.dim();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let union: Vec<usize> = ids.iter().copied().take(s_support).collect();
    let d_len = 1 + rng.random_range(0..d_support.max(1)).min(union.len() - 1);
    let diff = &union[..d_len];

    let mut x = vec![0.0; n];
    for &i in &union {
        // Leave some coordinates at zero so mixed-support pairs appear.
        if rng.random_bool(0.8) {
            x[i] = rng.random_range(-1.0..1.0);
        }
    }
    let mut y = x.clone();
    let mut norm_sq = 0.0;
    for &i in diff {
        let delta: f64 = rng.random_range(-1.0..1.0);
        y[i] += delta;
        norm_sq += delta * delta;
    }
    if norm_sq < 1e-18 {
        return 0.0;
    }
    let ux = obj.eval(&x);
    let uy = obj.eval(&y);
    let gx = obj.grad(&x);
    let inner: f64 = diff.iter().map(|&i| gx[i] * (y[i] - x[i])).sum();
    -2.0 * (uy - ux - inner) / norm_sq
}
