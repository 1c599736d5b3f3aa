//! Independence systems and exchange neighborhoods.
//!
//! Four system kinds are supported: uniform matroids, partition matroids,
//! intersections of matroids, and b-matchings (degree-bounded edge subsets,
//! a 2-exchange system). Systems are immutable after construction and answer
//! pure feasibility queries; all iteration orders are deterministic so that
//! argmax tie-breaking is reproducible.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::SupportSet;

/// A single matroid over ground set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Matroid {
    /// Feasible iff `|X| <= s`.
    Uniform { n: usize, s: usize },
    /// Feasible iff each part holds at most its capacity.
    /// `part_of[e]` is the part id of element `e`; `capacities[p]` the cap of part `p`.
    Partition {
        part_of: Vec<usize>,
        capacities: Vec<usize>,
    },
}

impl Matroid {
    pub fn uniform(n: usize, s: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidData("empty ground set".into()));
        }
        Ok(Matroid::Uniform { n, s })
    }

    pub fn partition(part_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if part_of.is_empty() {
            return Err(Error::InvalidData("empty ground set".into()));
        }
        if let Some(&p) = part_of.iter().find(|&&p| p >= capacities.len()) {
            return Err(Error::InvalidData(format!(
                "part id {p} has no capacity entry"
            )));
        }
        Ok(Matroid::Partition {
            part_of,
            capacities,
        })
    }

    pub fn n(&self) -> usize {
        match self {
            Matroid::Uniform { n, .. } => *n,
            Matroid::Partition { part_of, .. } => part_of.len(),
        }
    }

    fn contains(&self, x: &SupportSet) -> bool {
        match self {
            Matroid::Uniform { s, .. } => x.len() <= *s,
            Matroid::Partition {
                part_of,
                capacities,
            } => {
                let mut counts = vec![0usize; capacities.len()];
                for e in x.iter() {
                    let p = part_of[e];
                    counts[p] += 1;
                    if counts[p] > capacities[p] {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn rank(&self) -> usize {
        match self {
            Matroid::Uniform { n, s } => (*s).min(*n),
            Matroid::Partition {
                part_of,
                capacities,
            } => {
                let mut sizes = vec![0usize; capacities.len()];
                for &p in part_of {
                    sizes[p] += 1;
                }
                sizes
                    .iter()
                    .zip(capacities)
                    .map(|(sz, cap)| sz.min(cap))
                    .sum()
            }
        }
    }
}

/// An independence system: a downward-closed feasibility oracle together
/// with its exchange order `p` and rank (maximum feasible cardinality).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndependenceSystem {
    Matroid(Matroid),
    /// Sets independent in every member matroid simultaneously.
    Intersection { members: Vec<Matroid>, rank: usize },
    /// Edge subsets of a graph with every vertex degree at most `b`.
    BMatching {
        vertices: usize,
        /// Endpoints of each ground element (edge), `u < v`.
        endpoints: Vec<(usize, usize)>,
        b: usize,
        rank: usize,
    },
}

impl IndependenceSystem {
    pub fn uniform_matroid(n: usize, s: usize) -> Result<Self> {
        Ok(IndependenceSystem::Matroid(Matroid::uniform(n, s)?))
    }

    pub fn partition_matroid(part_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        Ok(IndependenceSystem::Matroid(Matroid::partition(
            part_of, capacities,
        )?))
    }

    /// Intersection of `p >= 2` matroids over a common ground set. The rank
    /// is computed by brute force for `n <= 20` and must be supplied above
    /// that via [`IndependenceSystem::matroid_intersection_with_rank`].
    pub fn matroid_intersection(members: Vec<Matroid>) -> Result<Self> {
        Self::intersection_impl(members, None)
    }

    pub fn matroid_intersection_with_rank(members: Vec<Matroid>, rank: usize) -> Result<Self> {
        Self::intersection_impl(members, Some(rank))
    }

    fn intersection_impl(members: Vec<Matroid>, rank: Option<usize>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::Config(
                "matroid intersection needs at least 2 members".into(),
            ));
        }
        let n = members[0].n();
        if members.iter().any(|m| m.n() != n) {
            return Err(Error::InvalidData(
                "member matroids have mismatched ground sets".into(),
            ));
        }
        let mut sys = IndependenceSystem::Intersection { members, rank: 0 };
        let rank = match rank {
            Some(r) => r,
            None if n <= 20 => sys.brute_force_rank(),
            None => {
                return Err(Error::TooLarge(
                    "rank must be supplied for intersections with n > 20".into(),
                ))
            }
        };
        if let IndependenceSystem::Intersection { rank: r, .. } = &mut sys {
            *r = rank;
        }
        Ok(sys)
    }

    /// b-matching over the edge set of a graph; ground element `e` is the
    /// edge `endpoints[e]`.
    pub fn b_matching(vertices: usize, endpoints: Vec<(usize, usize)>, b: usize) -> Result<Self> {
        if endpoints.is_empty() {
            return Err(Error::InvalidData("empty ground set".into()));
        }
        for &(u, v) in &endpoints {
            if u >= vertices || v >= vertices {
                return Err(Error::ElementOutOfRange {
                    element: u.max(v),
                    n: vertices,
                });
            }
            if u == v {
                return Err(Error::InvalidData("self-loop edge".into()));
            }
        }
        let n = endpoints.len();
        let mut sys = IndependenceSystem::BMatching {
            vertices,
            endpoints,
            b,
            rank: 0,
        };
        let rank = if n <= 20 {
            sys.brute_force_rank()
        } else {
            // Greedy lower bound is exact often enough for a size hint; large
            // instances should not rely on it and we refuse instead.
            return Err(Error::TooLarge(
                "b-matching rank computation limited to n <= 20".into(),
            ));
        };
        if let IndependenceSystem::BMatching { rank: r, .. } = &mut sys {
            *r = rank;
        }
        Ok(sys)
    }

    /// Number of ground set elements.
    pub fn n(&self) -> usize {
        match self {
            IndependenceSystem::Matroid(m) => m.n(),
            IndependenceSystem::Intersection { members, .. } => members[0].n(),
            IndependenceSystem::BMatching { endpoints, .. } => endpoints.len(),
        }
    }

    /// Exchange / intersection order: 1 for a single matroid, the number of
    /// members for an intersection, 2 for b-matching.
    pub fn p(&self) -> usize {
        match self {
            IndependenceSystem::Matroid(_) => 1,
            IndependenceSystem::Intersection { members, .. } => members.len(),
            IndependenceSystem::BMatching { .. } => 2,
        }
    }

    pub fn is_matroid(&self) -> bool {
        matches!(self, IndependenceSystem::Matroid(_))
    }

    /// Maximum cardinality of a feasible set.
    pub fn rank(&self) -> usize {
        match self {
            IndependenceSystem::Matroid(m) => m.rank(),
            IndependenceSystem::Intersection { rank, .. } => *rank,
            IndependenceSystem::BMatching { rank, .. } => *rank,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            IndependenceSystem::Matroid(Matroid::Uniform { .. }) => "uniform-matroid",
            IndependenceSystem::Matroid(Matroid::Partition { .. }) => "partition-matroid",
            IndependenceSystem::Intersection { .. } => "matroid-intersection",
            IndependenceSystem::BMatching { .. } => "b-matching",
        }
    }

    /// Independence oracle. Pure; the caller owns any call accounting.
    pub fn is_independent(&self, x: &SupportSet) -> Result<bool> {
        x.check_range(self.n())?;
        Ok(self.contains_unchecked(x))
    }

    fn contains_unchecked(&self, x: &SupportSet) -> bool {
        match self {
            IndependenceSystem::Matroid(m) => m.contains(x),
            IndependenceSystem::Intersection { members, .. } => {
                members.iter().all(|m| m.contains(x))
            }
            IndependenceSystem::BMatching {
                vertices,
                endpoints,
                b,
                ..
            } => {
                let mut degree = vec![0usize; *vertices];
                for e in x.iter() {
                    let (u, v) = endpoints[e];
                    degree[u] += 1;
                    degree[v] += 1;
                    if degree[u] > *b || degree[v] > *b {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn brute_force_rank(&self) -> usize {
        let n = self.n();
        let mut best = 0;
        let mut stack = vec![(SupportSet::empty(), 0usize)];
        while let Some((x, start)) = stack.pop() {
            best = best.max(x.len());
            for e in start..n {
                let y = x.with(e);
                if self.contains_unchecked(&y) {
                    stack.push((y, e + 1));
                }
            }
        }
        best
    }
}

/// Adds elements of `order` to `x` greedily while feasibility is preserved,
/// until no further element fits.
pub fn extend_to_maximal(
    sys: &IndependenceSystem,
    x: &SupportSet,
    order: &[usize],
) -> Result<SupportSet> {
    if !sys.is_independent(x)? {
        return Err(Error::InfeasibleInput(format!("{x} is not independent")));
    }
    let mut out = x.clone();
    // A single pass suffices: downward closure means an element rejected at
    // any point stays rejected as the set grows.
    for &e in order {
        if out.contains(e) {
            continue;
        }
        let candidate = out.with(e);
        if sys.is_independent(&candidate)? {
            out = candidate;
        }
    }
    Ok(out)
}

/// `extend_to_maximal` with the default ascending-id order.
pub fn extend_to_maximal_asc(sys: &IndependenceSystem, x: &SupportSet) -> Result<SupportSet> {
    let order: Vec<usize> = (0..sys.n()).collect();
    extend_to_maximal(sys, x, &order)
}

/// All pairs `(x, x')` with `x ∈ X`, `x' ∉ X`, and `X - x + x'` feasible,
/// in (x ascending, x' ascending) order. Only defined for single matroids.
pub fn swap_neighborhood(
    sys: &IndependenceSystem,
    x: &SupportSet,
) -> Result<Vec<(usize, usize)>> {
    if !sys.is_matroid() {
        return Err(Error::Config(
            "swap neighborhood is defined for single matroids; use the q-reachable neighborhood"
                .into(),
        ));
    }
    if !sys.is_independent(x)? {
        return Err(Error::InfeasibleInput(format!("{x} is not independent")));
    }
    let n = sys.n();
    let mut pairs = Vec::new();
    for drop in x.iter() {
        let base = x.without(drop);
        for add in 0..n {
            if x.contains(add) {
                continue;
            }
            if sys.is_independent(&base.with(add))? {
                pairs.push((drop, add));
            }
        }
    }
    Ok(pairs)
}

/// Reachability radius and the derived add/drop caps for the q-reachable
/// neighborhood of a p-matroid intersection or p-exchange system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub q: usize,
    pub add_cap: usize,
    pub drop_cap: usize,
    allow_large: bool,
}

impl NeighborhoodSpec {
    /// Caps per system kind: intersections allow `|X'\X| <= 2q`,
    /// `|X\X'| <= 2pq`; exchange systems allow `|X'\X| <= q`,
    /// `|X\X'| <= pq - q + 1`.
    pub fn for_system(sys: &IndependenceSystem, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Config("reachability radius q must be >= 1".into()));
        }
        let p = sys.p();
        let (add_cap, drop_cap) = match sys {
            IndependenceSystem::Matroid(_) => {
                return Err(Error::Config(
                    "q-reachability is defined for p >= 2 systems; single matroids use swaps"
                        .into(),
                ))
            }
            IndependenceSystem::Intersection { .. } => (2 * q, 2 * p * q),
            IndependenceSystem::BMatching { .. } => (q, p * q - q + 1),
        };
        Ok(NeighborhoodSpec {
            q,
            add_cap,
            drop_cap,
            allow_large: false,
        })
    }

    /// Lifts the enumeration-size guard (`q > 3` or `n > 64`).
    pub fn allow_large(mut self) -> Self {
        self.allow_large = true;
        self
    }

    fn check_budget(&self, n: usize) -> Result<()> {
        if !self.allow_large && (self.q > 3 || n > 64) {
            return Err(Error::TooLarge(format!(
                "q-reachable enumeration with q={} over n={} rejected; use allow_large to override",
                self.q, n
            )));
        }
        Ok(())
    }
}

/// All feasible `X'` with `|X'\X| <= add_cap` and `|X\X'| <= drop_cap`,
/// excluding `X` itself, sorted lexicographically by member list.
pub fn q_reachable_neighborhood(
    sys: &IndependenceSystem,
    x: &SupportSet,
    spec: &NeighborhoodSpec,
) -> Result<Vec<SupportSet>> {
    if sys.p() < 2 {
        return Err(Error::Config(
            "q-reachability is defined for p >= 2 systems".into(),
        ));
    }
    spec.check_budget(sys.n())?;
    if !sys.is_independent(x)? {
        return Err(Error::InfeasibleInput(format!("{x} is not independent")));
    }
    let outside: Vec<usize> = (0..sys.n()).filter(|e| !x.contains(*e)).collect();
    let inside: Vec<usize> = x.members().to_vec();

    let mut result = Vec::new();
    for add_size in 0..=spec.add_cap.min(outside.len()) {
        for add in outside.iter().copied().combinations(add_size) {
            for drop_size in 0..=spec.drop_cap.min(inside.len()) {
                for drop in inside.iter().copied().combinations(drop_size) {
                    if add.is_empty() && drop.is_empty() {
                        continue; // X itself
                    }
                    let mut candidate = x.clone();
                    for &e in &drop {
                        candidate.remove(e);
                    }
                    for &e in &add {
                        candidate.insert(e);
                    }
                    if sys.is_independent(&candidate)? {
                        result.push(candidate);
                    }
                }
            }
        }
    }
    // The (add, drop) -> X' map is injective, so no deduplication is needed;
    // sorting fixes the tie-breaking order for argmax scans.
    result.sort_unstable();
    result
        .windows(2)
        .for_each(|w| debug_assert!(w[0] != w[1]));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[usize]) -> SupportSet {
        SupportSet::from_iter(ids.iter().copied())
    }

    /// Triangle graph on vertices {a, b, c}: edges 0=ab, 1=bc, 2=ca.
    fn triangle_b1() -> IndependenceSystem {
        IndependenceSystem::b_matching(3, vec![(0, 1), (1, 2), (0, 2)], 1).unwrap()
    }

    #[test]
    fn partition_matroid_feasibility() {
        let sys =
            IndependenceSystem::partition_matroid(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        assert!(sys.is_independent(&set(&[0, 2])).unwrap());
        assert!(!sys.is_independent(&set(&[0, 1])).unwrap());
        assert!(sys.is_independent(&SupportSet::empty()).unwrap());
        assert_eq!(sys.rank(), 2);
    }

    #[test]
    fn out_of_range_is_an_input_error() {
        let sys = IndependenceSystem::uniform_matroid(3, 2).unwrap();
        assert!(matches!(
            sys.is_independent(&set(&[0, 3])),
            Err(Error::ElementOutOfRange { element: 3, n: 3 })
        ));
    }

    #[test]
    fn b_matching_triangle_degrees() {
        let sys = triangle_b1();
        // Edges 0=ab and 1=bc meet at vertex b.
        assert!(!sys.is_independent(&set(&[0, 1])).unwrap());
        assert!(sys.is_independent(&set(&[0])).unwrap());
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.p(), 2);
    }

    #[test]
    fn extend_uniform_ascending() {
        let sys = IndependenceSystem::uniform_matroid(3, 2).unwrap();
        let out = extend_to_maximal_asc(&sys, &SupportSet::empty()).unwrap();
        assert_eq!(out, set(&[0, 1]));
    }

    #[test]
    fn extend_partition_from_partial() {
        let sys =
            IndependenceSystem::partition_matroid(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let out = extend_to_maximal_asc(&sys, &set(&[1])).unwrap();
        assert_eq!(out, set(&[1, 2]));
    }

    #[test]
    fn extend_triangle_picks_first_edge() {
        let sys = triangle_b1();
        let out = extend_to_maximal_asc(&sys, &SupportSet::empty()).unwrap();
        assert_eq!(out, set(&[0]));
    }

    #[test]
    fn extend_rejects_infeasible_start() {
        let sys = IndependenceSystem::uniform_matroid(3, 1).unwrap();
        assert!(matches!(
            extend_to_maximal_asc(&sys, &set(&[0, 1])),
            Err(Error::InfeasibleInput(_))
        ));
    }

    #[test]
    fn swaps_uniform_singleton() {
        let sys = IndependenceSystem::uniform_matroid(3, 1).unwrap();
        let pairs = swap_neighborhood(&sys, &set(&[0])).unwrap();
        assert_eq!(pairs, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn swaps_partition() {
        let sys =
            IndependenceSystem::partition_matroid(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let pairs = swap_neighborhood(&sys, &set(&[0, 2])).unwrap();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn swaps_empty_when_no_outside_element() {
        let sys = IndependenceSystem::uniform_matroid(2, 2).unwrap();
        let pairs = swap_neighborhood(&sys, &set(&[0, 1])).unwrap();
        assert!(pairs.is_empty());
    }

    #[test]
    fn swaps_reject_p_systems() {
        let sys = triangle_b1();
        assert!(matches!(
            swap_neighborhood(&sys, &set(&[0])),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn q_reachable_triangle() {
        let sys = triangle_b1();
        let spec = NeighborhoodSpec::for_system(&sys, 1).unwrap();
        assert_eq!((spec.add_cap, spec.drop_cap), (1, 2));
        let hood = q_reachable_neighborhood(&sys, &set(&[0]), &spec).unwrap();
        assert!(hood.contains(&set(&[1])));
        assert!(hood.contains(&set(&[2])));
        assert!(hood.contains(&SupportSet::empty()));
        assert!(!hood.contains(&set(&[0, 1])));
        assert!(!hood.contains(&set(&[0])));
        assert_eq!(hood.len(), 3);
    }

    #[test]
    fn q_reachable_two_rank1_matroids() {
        let members = vec![Matroid::uniform(2, 1).unwrap(), Matroid::uniform(2, 1).unwrap()];
        let sys = IndependenceSystem::matroid_intersection(members).unwrap();
        let spec = NeighborhoodSpec::for_system(&sys, 1).unwrap();
        assert_eq!((spec.add_cap, spec.drop_cap), (2, 4));
        let hood = q_reachable_neighborhood(&sys, &set(&[0]), &spec).unwrap();
        assert_eq!(hood, vec![SupportSet::empty(), set(&[1])]);
    }

    #[test]
    fn q_reachable_from_empty_is_all_small_feasible_sets() {
        let sys = triangle_b1();
        let spec = NeighborhoodSpec::for_system(&sys, 1).unwrap();
        let hood = q_reachable_neighborhood(&sys, &SupportSet::empty(), &spec).unwrap();
        assert_eq!(hood, vec![set(&[0]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn neighborhood_guard() {
        let endpoints: Vec<(usize, usize)> = (0..10).map(|i| (i, i + 1)).collect();
        let sys = IndependenceSystem::b_matching(11, endpoints, 1).unwrap();
        let spec = NeighborhoodSpec {
            q: 4,
            add_cap: 4,
            drop_cap: 5,
            allow_large: false,
        };
        assert!(matches!(
            q_reachable_neighborhood(&sys, &SupportSet::empty(), &spec),
            Err(Error::TooLarge(_))
        ));
        let spec = spec.allow_large();
        assert!(q_reachable_neighborhood(&sys, &SupportSet::empty(), &spec).is_ok());
    }

    #[test]
    fn intersection_rank_by_brute_force() {
        // Rows/columns of a 2x3 grid: rank 2 (one cell per row, distinct columns
        // allowed by column caps).
        let rows = Matroid::partition(vec![0, 0, 0, 1, 1, 1], vec![1, 1]).unwrap();
        let cols = Matroid::partition(vec![0, 1, 2, 0, 1, 2], vec![1, 1, 1]).unwrap();
        let sys = IndependenceSystem::matroid_intersection(vec![rows, cols]).unwrap();
        assert_eq!(sys.rank(), 2);
        assert!(sys.is_independent(&set(&[0, 4])).unwrap());
        assert!(!sys.is_independent(&set(&[0, 3])).unwrap());
        assert!(!sys.is_independent(&set(&[0, 1])).unwrap());
    }

    /// Brute-force q-reachable enumeration straight from the definition.
    fn brute_force_f_q(
        sys: &IndependenceSystem,
        x: &SupportSet,
        add_cap: usize,
        drop_cap: usize,
    ) -> Vec<SupportSet> {
        let n = sys.n();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            let cand = SupportSet::from_iter((0..n).filter(|i| mask >> i & 1 == 1));
            if cand == *x || !sys.is_independent(&cand).unwrap() {
                continue;
            }
            if cand.difference(x).len() <= add_cap && x.difference(&cand).len() <= drop_cap {
                out.push(cand);
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn q_reachable_matches_brute_force_on_small_instances() {
        let bowtie = IndependenceSystem::b_matching(
            5,
            vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)],
            2,
        )
        .unwrap();
        let rows = Matroid::partition(vec![0, 0, 1, 1, 2, 2], vec![1, 1, 1]).unwrap();
        let cols = Matroid::partition(vec![0, 1, 0, 1, 0, 1], vec![2, 1]).unwrap();
        let grid = IndependenceSystem::matroid_intersection(vec![rows, cols]).unwrap();

        for sys in [&bowtie, &grid] {
            for q in 1..=2 {
                let spec = NeighborhoodSpec::for_system(sys, q).unwrap();
                let n = sys.n();
                for mask in 0u64..(1 << n) {
                    let x = SupportSet::from_iter((0..n).filter(|i| mask >> i & 1 == 1));
                    if !sys.is_independent(&x).unwrap() {
                        continue;
                    }
                    let fast = q_reachable_neighborhood(sys, &x, &spec).unwrap();
                    let slow = brute_force_f_q(sys, &x, spec.add_cap, spec.drop_cap);
                    assert_eq!(fast, slow, "mismatch for {} at X={x}, q={q}", sys.kind_name());
                }
            }
        }
    }

    /// Checks the 2-exchange axioms for b-matching by brute force: for every
    /// pair of feasible S, T there must exist a map φ: T\S -> 2^{S\T} with
    /// |φ(v)| <= 2, each element of S\T used at most twice overall, and
    /// (S \ ∪_{v∈Y} φ(v)) ∪ Y feasible for every Y ⊆ T\S.
    #[test]
    fn b_matching_satisfies_two_exchange_axioms() {
        let sys = IndependenceSystem::b_matching(
            4,
            vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)],
            1,
        )
        .unwrap();
        let n = sys.n();
        let mut feasible = Vec::new();
        for mask in 0u64..(1 << n) {
            let x = SupportSet::from_iter((0..n).filter(|i| mask >> i & 1 == 1));
            if sys.is_independent(&x).unwrap() {
                feasible.push(x);
            }
        }
        for s in &feasible {
            for t in &feasible {
                assert!(
                    exchange_map_exists(&sys, s, t, 2),
                    "no 2-exchange map from S={s} to T={t}"
                );
            }
        }
    }

    fn exchange_map_exists(
        sys: &IndependenceSystem,
        s: &SupportSet,
        t: &SupportSet,
        p: usize,
    ) -> bool {
        let incoming: Vec<usize> = t.difference(s).members().to_vec();
        let outgoing: Vec<usize> = s.difference(t).members().to_vec();
        if incoming.is_empty() {
            return true; // φ is the empty map; condition (c) with Y=∅ is S ∈ I.
        }
        // Candidate images per incoming element: subsets of S\T of size <= p.
        let images: Vec<Vec<usize>> = (0..=p.min(outgoing.len()))
            .flat_map(|k| outgoing.iter().copied().combinations(k))
            .collect();
        let mut assignment = vec![0usize; incoming.len()];
        loop {
            if map_is_valid(sys, s, &incoming, &images, &assignment, p) {
                return true;
            }
            // Advance the mixed-radix counter over image choices.
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    return false;
                }
                assignment[i] += 1;
                if assignment[i] < images.len() {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    fn map_is_valid(
        sys: &IndependenceSystem,
        s: &SupportSet,
        incoming: &[usize],
        images: &[Vec<usize>],
        assignment: &[usize],
        p: usize,
    ) -> bool {
        let mut usage: std::collections::HashMap<usize, usize> = Default::default();
        for &img in assignment {
            for &e in &images[img] {
                *usage.entry(e).or_default() += 1;
            }
        }
        if usage.values().any(|&c| c > p) {
            return false;
        }
        // Condition (c) over all subsets Y of the incoming elements.
        for mask in 0u64..(1 << incoming.len()) {
            let mut cand = s.clone();
            for (i, &v) in incoming.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &e in &images[assignment[i]] {
                        cand.remove(e);
                    }
                    cand.insert(v);
                }
            }
            if !sys.is_independent(&cand).unwrap() {
                return false;
            }
        }
        true
    }
}
