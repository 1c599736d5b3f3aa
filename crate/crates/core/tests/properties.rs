//! Property suites for constraint systems and oracles: downward closure,
//! neighborhood equivalence against brute force, monotonicity, and the
//! identity-design score/gain equality.

use std::sync::Arc;

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use locsearch::baselines::random_selection;
use locsearch::corpus::{self, CorpusInstance};
use locsearch::search::non_oblivious_score;
use locsearch::{
    swap_neighborhood, IndependenceSystem, Matroid, NeighborhoodSpec, SetOracle, SupportSet,
};

fn subsets(n: usize) -> impl Iterator<Item = SupportSet> {
    (0u64..(1 << n)).map(move |mask| SupportSet::from_iter((0..n).filter(|i| mask >> i & 1 == 1)))
}

fn sample_systems() -> Vec<IndependenceSystem> {
    vec![
        IndependenceSystem::uniform_matroid(6, 3).unwrap(),
        IndependenceSystem::partition_matroid(vec![0, 0, 1, 1, 2, 2], vec![1, 2, 1]).unwrap(),
        IndependenceSystem::matroid_intersection(vec![
            Matroid::partition(vec![0, 0, 0, 1, 1, 1], vec![1, 1]).unwrap(),
            Matroid::partition(vec![0, 1, 2, 0, 1, 2], vec![1, 1, 1]).unwrap(),
        ])
        .unwrap(),
        IndependenceSystem::b_matching(4, vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], 1)
            .unwrap(),
        IndependenceSystem::b_matching(5, vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)], 2)
            .unwrap(),
    ]
}

#[test]
fn downward_closure_on_sampled_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for sys in sample_systems() {
        for trial in 0..200 {
            let maximal = random_selection(&sys, trial).unwrap();
            // Random proper subset of a feasible set stays feasible.
            let keep: Vec<usize> = maximal
                .iter()
                .filter(|_| rng.random_bool(0.6))
                .collect();
            let x = SupportSet::from_iter(keep);
            assert!(
                sys.is_independent(&x).unwrap(),
                "{}: subset {x} of {maximal} infeasible",
                sys.kind_name()
            );
        }
    }
}

#[test]
fn swap_neighborhood_matches_brute_force_on_matroids() {
    for sys in sample_systems().into_iter().filter(|s| s.is_matroid()) {
        let n = sys.n();
        for x in subsets(n).filter(|x| sys.is_independent(x).unwrap()) {
            let fast = swap_neighborhood(&sys, &x).unwrap();
            let mut slow = Vec::new();
            for drop in x.iter() {
                for add in 0..n {
                    if x.contains(add) {
                        continue;
                    }
                    if sys.is_independent(&x.without(drop).with(add)).unwrap() {
                        slow.push((drop, add));
                    }
                }
            }
            assert_eq!(fast, slow, "{} at X = {x}", sys.kind_name());
        }
    }
}

#[test]
fn q_reachable_matches_brute_force_on_p_systems() {
    for sys in sample_systems().into_iter().filter(|s| !s.is_matroid()) {
        for q in 1..=2usize {
            let spec = NeighborhoodSpec::for_system(&sys, q).unwrap();
            let n = sys.n();
            for x in subsets(n).filter(|x| sys.is_independent(x).unwrap()) {
                let fast =
                    locsearch::q_reachable_neighborhood(&sys, &x, &spec).unwrap();
                let mut slow: Vec<SupportSet> = subsets(n)
                    .filter(|c| {
                        *c != x
                            && sys.is_independent(c).unwrap()
                            && c.difference(&x).len() <= spec.add_cap
                            && x.difference(c).len() <= spec.drop_cap
                    })
                    .collect();
                slow.sort();
                assert_eq!(fast, slow, "{} q={q} X={x}", sys.kind_name());
            }
        }
    }
}

#[test]
fn lifted_function_is_monotone_on_sampled_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for inst in corpus::small_corpus().iter().step_by(3) {
        let mut oracle = inst.oracle();
        let n = inst.n();
        for _ in 0..20 {
            let y = SupportSet::from_iter((0..n).filter(|_| rng.random_bool(0.5)));
            let x = SupportSet::from_iter(y.iter().filter(|_| rng.random_bool(0.6)));
            let fx = oracle.value(&x).unwrap();
            let fy = oracle.value(&y).unwrap();
            assert!(
                fy >= fx - 1e-9,
                "{}: f({x}) = {fx} > f({y}) = {fy}",
                inst.name
            );
        }
    }
}

#[test]
fn score_equals_gain_for_identity_design() {
    // H = c·I makes the quadratic surrogate exact: the non-oblivious score
    // of any swap equals the true gain.
    let obj = corpus::fixture_r1();
    let m_const = 0.08;
    let mut oracle = SetOracle::new(Arc::new(obj));
    for x in subsets(2) {
        for drop in x.iter() {
            for add in 0..2 {
                if x.contains(add) {
                    continue;
                }
                let score = non_oblivious_score(
                    &mut oracle,
                    &x,
                    &SupportSet::singleton(drop),
                    &SupportSet::singleton(add),
                    m_const,
                )
                .unwrap();
                let target = x.without(drop).with(add);
                let gain =
                    oracle.value(&target).unwrap() - oracle.value(&x).unwrap();
                assert!(
                    (score - gain).abs() < 1e-9,
                    "X={x} drop={drop} add={add}: score {score} vs gain {gain}"
                );
            }
        }
    }
}

fn instance_by_name(name: &str) -> CorpusInstance {
    corpus::small_corpus()
        .into_iter()
        .find(|i| i.name == name)
        .expect("corpus instance")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Feasibility is preserved by every algorithm state: random feasible
    /// starts extended to maximal stay feasible.
    #[test]
    fn extension_preserves_feasibility(seed in 0u64..500) {
        let inst = instance_by_name("bowtie-b2");
        let x = random_selection(&inst.system, seed).unwrap();
        prop_assert!(inst.system.is_independent(&x).unwrap());
        // Maximality: no single addition stays feasible.
        for e in 0..inst.n() {
            if !x.contains(e) {
                prop_assert!(!inst.system.is_independent(&x.with(e)).unwrap());
            }
        }
    }

    /// Central-difference gradient agreement on random quadratics.
    #[test]
    fn gradient_matches_finite_differences(seed in 0u64..200) {
        let obj = corpus::random_quadratic(5, 8, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let w: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
        let oracle = SetOracle::new(Arc::new(obj));
        let g = oracle.grad_u(&w).unwrap();
        let h = 1e-6;
        for i in 0..5 {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[i] += h;
            wm[i] -= h;
            let fd = (oracle.eval_u(&wp).unwrap() - oracle.eval_u(&wm).unwrap()) / (2.0 * h);
            let scale = g[i].abs().max(1.0);
            prop_assert!((fd - g[i]).abs() / scale < 1e-5);
        }
    }

    /// Union/difference/symmetric-difference identities.
    #[test]
    fn set_algebra_identities(a in proptest::collection::vec(0usize..16, 0..10),
                              b in proptest::collection::vec(0usize..16, 0..10)) {
        let x = SupportSet::from_iter(a);
        let y = SupportSet::from_iter(b);
        let sym = x.symmetric_difference(&y);
        prop_assert_eq!(sym.clone(), y.symmetric_difference(&x));
        prop_assert_eq!(
            x.symmetric_difference(&sym), y.clone()
        );
        prop_assert!(x.difference(&y).is_disjoint_from(&y));
        prop_assert!(x.intersection(&y).is_subset_of(&x));
        let union = x.union(&y);
        prop_assert!(x.is_subset_of(&union) && y.is_subset_of(&union));
    }
}
