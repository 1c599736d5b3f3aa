//! Bundled small-instance corpus.
//!
//! Deterministic quadratic instances with n ≤ 8 ground elements spanning
//! uniform matroids, partition matroids, a 2-matroid intersection, and
//! b-matchings. The verification suites treat a failure on any of these
//! instances as a build-breaking regression.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::constraints::{IndependenceSystem, Matroid};
use crate::objective::{QuadraticR2, RestrictedConstants, SetOracle};

/// One corpus entry: a quadratic objective paired with a constraint.
#[derive(Clone)]
pub struct CorpusInstance {
    pub name: &'static str,
    pub objective: Arc<QuadraticR2>,
    pub system: IndependenceSystem,
    /// Reachability radius used for p ≥ 2 systems.
    pub q: usize,
}

impl CorpusInstance {
    pub fn oracle(&self) -> SetOracle {
        SetOracle::new(self.objective.clone())
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    /// Full-range exact constants: `m_s` for `s = 1..=n` and `M_{s,t}` for
    /// `t = 1..=n`.
    pub fn exact_constants(&self) -> RestrictedConstants {
        let range: Vec<usize> = (1..=self.n()).collect();
        RestrictedConstants::exact_quadratic(&self.objective, &range, &range)
            .expect("corpus instances satisfy the exact-mode guard")
    }
}

/// `A = I₂`, `y = (3, 4)`: the two-feature fixture with `H = 0.08·I`,
/// singleton values 0.36 and 0.64, and a perfect two-feature fit.
pub fn fixture_r1() -> QuadraticR2 {
    QuadraticR2::new(DMatrix::identity(2, 2), DVector::from_vec(vec![3.0, 4.0])).unwrap()
}

/// Columns `(1,0)`, `(0,1)`, `(1,1)/√2` with `y = (3, 4)`: singleton values
/// 0.36, 0.64, 0.98.
pub fn fixture_r2() -> QuadraticR2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    QuadraticR2::from_rows(&[vec![1.0, 0.0, s], vec![0.0, 1.0, s]], vec![3.0, 4.0]).unwrap()
}

/// Seeded random design: standard-normal entries, a planted sparse support,
/// and mild response noise. `n_samples >= n_features` keeps the scaled
/// Hessian positive definite.
pub fn random_quadratic(n_features: usize, n_samples: usize, seed: u64) -> QuadraticR2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(n_samples, n_features, |_, _| {
        rng.sample::<f64, _>(StandardNormal)
    });
    let truth = (n_features / 2).max(1);
    let mut w = DVector::zeros(n_features);
    for j in 0..truth {
        w[j] = rng.sample::<f64, _>(StandardNormal);
    }
    let noise = DVector::from_fn(n_samples, |_, _| {
        0.1 * rng.sample::<f64, _>(StandardNormal)
    });
    let y = &a * w + noise;
    QuadraticR2::new(a, y).expect("random response is nonzero")
}

/// Diagonal design with orthogonal columns: the lifted set function is
/// modular, the localizability constants collapse to (1, 1, 0).
pub fn diagonal_quadratic(n: usize, seed: u64) -> QuadraticR2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        a[(j, j)] = 0.5 + rng.random_range(0.0..1.5);
    }
    let y = DVector::from_fn(n, |_, _| 0.2 + rng.random_range(0.0..1.0));
    QuadraticR2::new(a, y).unwrap()
}

fn uniform(n: usize, s: usize) -> IndependenceSystem {
    IndependenceSystem::uniform_matroid(n, s).unwrap()
}

fn partition(part_of: &[usize], caps: &[usize]) -> IndependenceSystem {
    IndependenceSystem::partition_matroid(part_of.to_vec(), caps.to_vec()).unwrap()
}

fn b_matching(vertices: usize, edges: &[(usize, usize)], b: usize) -> IndependenceSystem {
    IndependenceSystem::b_matching(vertices, edges.to_vec(), b).unwrap()
}

const TRIANGLE: &[(usize, usize)] = &[(0, 1), (1, 2), (0, 2)];
const PATH4: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3)];
const STAR4: &[(usize, usize)] = &[(0, 1), (0, 2), (0, 3)];
const CYCLE4: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (0, 3)];
const CYCLE4_CHORD: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)];
const CYCLE5: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
const K4: &[(usize, usize)] = &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
const BOWTIE: &[(usize, usize)] = &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)];
const CYCLE8: &[(usize, usize)] = &[
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (6, 7),
    (0, 7),
];

/// The bundled corpus: 40 quadratic instances with n ≤ 8.
pub fn small_corpus() -> Vec<CorpusInstance> {
    let r1 = Arc::new(fixture_r1());
    let r2 = Arc::new(fixture_r2());
    let mut out = Vec::new();
    let mut push = |name: &'static str,
                    objective: Arc<QuadraticR2>,
                    system: IndependenceSystem,
                    q: usize| {
        out.push(CorpusInstance {
            name,
            objective,
            system,
            q,
        });
    };

    // Fixtures. The three-feature fixture only pairs with rank-1 systems:
    // its two-sample design is singular on 3-sparse supports.
    push("r1-uniform-1", r1.clone(), uniform(2, 1), 1);
    push("r1-uniform-2", r1.clone(), uniform(2, 2), 1);
    push("r2-uniform-1", r2.clone(), uniform(3, 1), 1);
    push(
        "rand3-partition",
        Arc::new(random_quadratic(3, 7, 100)),
        partition(&[0, 0, 1], &[1, 1]),
        1,
    );

    // Uniform matroids over random designs.
    for (name, n, s, seed) in [
        ("rand4-uniform-2a", 4, 2, 101),
        ("rand4-uniform-2b", 4, 2, 102),
        ("rand5-uniform-2", 5, 2, 103),
        ("rand6-uniform-2", 6, 2, 104),
        ("rand6-uniform-3a", 6, 3, 105),
        ("rand6-uniform-3b", 6, 3, 106),
        ("rand8-uniform-2", 8, 2, 107),
        ("rand8-uniform-3", 8, 3, 108),
        ("rand8-uniform-4", 8, 4, 109),
    ] {
        let obj = Arc::new(random_quadratic(n, n + 4, seed));
        push(name, obj, uniform(n, s), 1);
    }

    // Partition matroids over random designs.
    for (name, n, parts, caps, seed) in [
        (
            "rand4-partition-11",
            4,
            vec![0usize, 0, 1, 1],
            vec![1usize, 1],
            111,
        ),
        ("rand4-partition-21", 4, vec![0, 0, 0, 1], vec![2, 1], 112),
        (
            "rand6-partition-111",
            6,
            vec![0, 0, 1, 1, 2, 2],
            vec![1, 1, 1],
            113,
        ),
        ("rand6-partition-21", 6, vec![0, 0, 0, 1, 1, 1], vec![2, 1], 114),
        (
            "rand8-partition-1111",
            8,
            vec![0, 0, 1, 1, 2, 2, 3, 3],
            vec![1, 1, 1, 1],
            115,
        ),
        (
            "rand8-partition-22",
            8,
            vec![0, 0, 0, 0, 1, 1, 1, 1],
            vec![2, 2],
            116,
        ),
    ] {
        let obj = Arc::new(random_quadratic(n, n + 4, seed));
        push(name, obj, partition(&parts, &caps), 1);
    }

    // Modular objectives (orthogonal columns).
    push(
        "diag4-uniform-2",
        Arc::new(diagonal_quadratic(4, 121)),
        uniform(4, 2),
        1,
    );
    push(
        "diag6-partition",
        Arc::new(diagonal_quadratic(6, 122)),
        partition(&[0, 0, 0, 1, 1, 1], &[1, 2]),
        1,
    );

    // 2-matroid intersections (grid row/column assignments).
    let grid23 = || {
        IndependenceSystem::matroid_intersection(vec![
            Matroid::partition(vec![0, 0, 0, 1, 1, 1], vec![1, 1]).unwrap(),
            Matroid::partition(vec![0, 1, 2, 0, 1, 2], vec![1, 1, 1]).unwrap(),
        ])
        .unwrap()
    };
    push(
        "grid23-intersection-q1",
        Arc::new(random_quadratic(6, 10, 131)),
        grid23(),
        1,
    );
    push(
        "grid23-intersection-q2",
        Arc::new(random_quadratic(6, 10, 132)),
        grid23(),
        2,
    );
    push(
        "grid24-intersection-q1",
        Arc::new(random_quadratic(8, 12, 133)),
        IndependenceSystem::matroid_intersection(vec![
            Matroid::partition(vec![0, 0, 0, 0, 1, 1, 1, 1], vec![1, 1]).unwrap(),
            Matroid::partition(vec![0, 1, 2, 3, 0, 1, 2, 3], vec![1, 1, 1, 1]).unwrap(),
        ])
        .unwrap(),
        1,
    );
    push(
        "ragged-intersection-q1",
        Arc::new(random_quadratic(6, 10, 134)),
        IndependenceSystem::matroid_intersection(vec![
            Matroid::partition(vec![0, 0, 1, 1, 2, 2], vec![1, 1, 1]).unwrap(),
            Matroid::partition(vec![0, 1, 0, 1, 0, 1], vec![2, 1]).unwrap(),
        ])
        .unwrap(),
        1,
    );

    // b-matchings over random edge objectives.
    for (name, vertices, edges, b, seed) in [
        ("triangle-b1", 3, TRIANGLE, 1, 141),
        ("path4-b1", 4, PATH4, 1, 142),
        ("star4-b1", 4, STAR4, 1, 143),
        ("star4-b2", 4, STAR4, 2, 144),
        ("cycle4-b1", 4, CYCLE4, 1, 145),
        ("cycle4-chord-b1", 4, CYCLE4_CHORD, 1, 146),
        ("cycle4-chord-b2", 4, CYCLE4_CHORD, 2, 147),
        ("cycle5-b2", 5, CYCLE5, 2, 148),
        ("k4-b1", 4, K4, 1, 149),
        ("k4-b2", 4, K4, 2, 150),
        ("bowtie-b1", 5, BOWTIE, 1, 151),
        ("bowtie-b2", 5, BOWTIE, 2, 152),
        ("cycle8-b1", 8, CYCLE8, 1, 153),
        ("cycle8-b2", 8, CYCLE8, 2, 154),
    ] {
        let obj = Arc::new(random_quadratic(edges.len(), edges.len() + 4, seed));
        push(name, obj, b_matching(vertices, edges, b), 1);
    }

    out
}
