//! Synthetic dataset generators and their JSON schema.
//!
//! Two families: sparse-regression designs with a feature partition, and
//! Ising spin samples drawn by Gibbs sampling from a random regular graph.
//! Generation is fully determined by the seed. See SCHEMAS.md for the
//! on-disk format.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use locsearch::{IndependenceSystem, IsingPll, QuadraticR2, SetOracle};

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk dataset: either kind, tagged by `kind`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Dataset {
    Regression(RegressionDataset),
    Ising(IsingDataset),
}

impl Dataset {
    pub fn id(&self) -> &str {
        match self {
            Dataset::Regression(d) => &d.id,
            Dataset::Ising(d) => &d.id,
        }
    }

    /// Ground set size: features, or vertex pairs.
    pub fn n_elements(&self) -> usize {
        match self {
            Dataset::Regression(d) => d.n_features,
            Dataset::Ising(d) => d.pairs.len(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("reading dataset {}", path.display()))?;
        let ds: Dataset = serde_json::from_str(&raw)
            .with_context(|| format!("parsing dataset {}", path.display()))?;
        ds.validate()?;
        Ok(ds)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json)
            .with_context(|| format!("writing dataset {}", path.display()))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Dataset::Regression(d) => d.validate(),
            Dataset::Ising(d) => d.validate(),
        }
    }

    /// Builds the value/gradient oracle over this dataset.
    pub fn oracle(&self) -> Result<SetOracle> {
        match self {
            Dataset::Regression(d) => Ok(SetOracle::new(Arc::new(d.objective()?))),
            Dataset::Ising(d) => Ok(SetOracle::new(Arc::new(d.objective()?))),
        }
    }

    /// Builds the constraint for one sweep value: a partition matroid with
    /// the given per-part capacity, or a b-matching with the given bound.
    pub fn system(&self, sweep_value: usize) -> Result<IndependenceSystem> {
        match self {
            Dataset::Regression(d) => d.system(sweep_value),
            Dataset::Ising(d) => d.system(sweep_value),
        }
    }
}

/// Sparse-regression design with standardized columns and a feature
/// partition into equal categories.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionDataset {
    pub schema_version: u32,
    pub id: String,
    pub seed: u64,
    pub n_samples: usize,
    pub n_features: usize,
    pub n_parts: usize,
    pub truth_per_part: usize,
    pub noise_sd: f64,
    /// Row-major design matrix, `n_samples` rows of `n_features` columns.
    pub a: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    /// Part id per feature.
    pub partition: Vec<usize>,
    pub true_support: Vec<usize>,
}

impl RegressionDataset {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema version {}", self.schema_version);
        }
        if self.a.len() != self.n_samples || self.a.iter().any(|r| r.len() != self.n_features) {
            bail!("design matrix shape mismatch");
        }
        if self.y.len() != self.n_samples {
            bail!("response length mismatch");
        }
        if self.partition.len() != self.n_features {
            bail!("partition length mismatch");
        }
        if self.y.iter().map(|v| v * v).sum::<f64>() == 0.0 {
            bail!("response vector is zero; objective undefined");
        }
        Ok(())
    }

    pub fn objective(&self) -> Result<QuadraticR2> {
        Ok(QuadraticR2::from_rows(&self.a, self.y.clone())?)
    }

    pub fn system(&self, capacity: usize) -> Result<IndependenceSystem> {
        Ok(IndependenceSystem::partition_matroid(
            self.partition.clone(),
            vec![capacity; self.n_parts],
        )?)
    }
}

/// Uniform-entry design, standardized columns, planted sparse support with
/// equal truth per part, Gaussian response noise.
pub fn gen_regression(
    n_samples: usize,
    n_features: usize,
    n_parts: usize,
    truth_per_part: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<RegressionDataset> {
    if n_parts == 0 || n_features % n_parts != 0 {
        bail!("n_features ({n_features}) must be divisible by n_parts ({n_parts})");
    }
    let part_size = n_features / n_parts;
    if truth_per_part > part_size {
        bail!("truth_per_part ({truth_per_part}) exceeds part size ({part_size})");
    }
    if n_samples < 2 {
        bail!("need at least 2 samples to standardize columns");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut a = vec![vec![0.0f64; n_features]; n_samples];
    for row in &mut a {
        for v in row.iter_mut() {
            *v = rng.random_range(0.0..1.0);
        }
    }
    // Standardize each column to mean 0, population sd 1.
    for j in 0..n_features {
        let mean = a.iter().map(|r| r[j]).sum::<f64>() / n_samples as f64;
        let var = a.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n_samples as f64;
        let sd = var.sqrt();
        if sd == 0.0 {
            bail!("degenerate constant column {j}");
        }
        for row in &mut a {
            row[j] = (row[j] - mean) / sd;
        }
    }

    let partition: Vec<usize> = (0..n_features).map(|j| j / part_size).collect();
    let mut true_support = Vec::new();
    for p in 0..n_parts {
        let mut block: Vec<usize> = (p * part_size..(p + 1) * part_size).collect();
        block.shuffle(&mut rng);
        true_support.extend(block.into_iter().take(truth_per_part));
    }
    true_support.sort_unstable();

    let weights: Vec<f64> = true_support
        .iter()
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mut y = vec![0.0f64; n_samples];
    for (i, row) in a.iter().enumerate() {
        let mut v = 0.0;
        for (&j, &w) in true_support.iter().zip(&weights) {
            v += row[j] * w;
        }
        y[i] = v + noise_sd * rng.sample::<f64, _>(StandardNormal);
    }

    let ds = RegressionDataset {
        schema_version: SCHEMA_VERSION,
        id: format!("reg-n{n_samples}-d{n_features}-p{n_parts}-s{seed}"),
        seed,
        n_samples,
        n_features,
        n_parts,
        truth_per_part,
        noise_sd,
        a,
        y,
        partition,
        true_support,
    };
    ds.validate()?;
    Ok(ds)
}

/// Ising samples over a random regular graph; the ground set is every
/// vertex pair, ordered lexicographically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsingDataset {
    pub schema_version: u32,
    pub id: String,
    pub seed: u64,
    pub n_vertices: usize,
    pub degree: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// True couplings as (u, v, weight) with u < v.
    pub true_edges: Vec<(usize, usize, f64)>,
    /// Ground set: all vertex pairs (u, v) with u < v, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    /// ±1 spins, `n_samples` rows of `n_vertices` entries.
    pub samples: Vec<Vec<i8>>,
}

impl IsingDataset {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema version {}", self.schema_version);
        }
        let expected: Vec<(usize, usize)> = all_pairs(self.n_vertices);
        if self.pairs != expected {
            bail!("pair list must cover all vertex pairs in lexicographic order");
        }
        for row in &self.samples {
            if row.len() != self.n_vertices {
                bail!("sample width mismatch");
            }
            if row.iter().any(|&x| x != 1 && x != -1) {
                bail!("samples must be ±1");
            }
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn objective(&self) -> Result<IsingPll> {
        let samples: Vec<Vec<f64>> = self
            .samples
            .iter()
            .map(|row| row.iter().map(|&x| x as f64).collect())
            .collect();
        Ok(IsingPll::new(self.n_vertices, self.pairs.clone(), samples)?)
    }

    pub fn system(&self, b: usize) -> Result<IndependenceSystem> {
        Ok(IndependenceSystem::b_matching(
            self.n_vertices,
            self.pairs.clone(),
            b,
        )?)
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    pairs
}

/// Random d-regular simple graph via the configuration model, resampling
/// until simple; ±0.5 couplings; random-scan Gibbs sampling with the given
/// burn-in and thinning (both in sweeps of `n_vertices` single-site
/// updates).
pub fn gen_ising(
    n_vertices: usize,
    degree: usize,
    n_samples: usize,
    burn_in: usize,
    thin: usize,
    seed: u64,
) -> Result<IsingDataset> {
    if degree >= n_vertices {
        bail!("degree ({degree}) must be below the vertex count ({n_vertices})");
    }
    if (n_vertices * degree) % 2 != 0 {
        bail!("n_vertices · degree must be even for a regular graph");
    }
    if thin == 0 {
        bail!("thinning interval must be >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let edges = loop {
        let mut stubs: Vec<usize> = (0..n_vertices)
            .flat_map(|v| std::iter::repeat(v).take(degree))
            .collect();
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(stubs.len() / 2);
        let mut simple = true;
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || edges.contains(&(u, v)) {
                simple = false;
                break;
            }
            edges.push((u, v));
        }
        if simple {
            edges.sort_unstable();
            break edges;
        }
    };

    let true_edges: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(u, v)| {
            let w = if rng.random_bool(0.5) { 0.5 } else { -0.5 };
            (u, v, w)
        })
        .collect();

    // Adjacency with couplings for the sampler.
    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_vertices];
    for &(u, v, w) in &true_edges {
        neighbors[u].push((v, w));
        neighbors[v].push((u, w));
    }

    let mut state: Vec<i8> = (0..n_vertices)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    let sweep = |state: &mut Vec<i8>, rng: &mut ChaCha8Rng| {
        for _ in 0..n_vertices {
            let v = rng.random_range(0..n_vertices);
            let field: f64 = neighbors[v]
                .iter()
                .map(|&(u, w)| w * state[u] as f64)
                .sum();
            let p_plus = 1.0 / (1.0 + (-2.0 * field).exp());
            state[v] = if rng.random_bool(p_plus.clamp(0.0, 1.0)) {
                1
            } else {
                -1
            };
        }
    };
    for _ in 0..burn_in {
        sweep(&mut state, &mut rng);
    }
    let mut samples = Vec::with_capacity(n_samples);
    while samples.len() < n_samples {
        for _ in 0..thin {
            sweep(&mut state, &mut rng);
        }
        samples.push(state.clone());
    }

    let ds = IsingDataset {
        schema_version: SCHEMA_VERSION,
        id: format!("ising-v{n_vertices}-d{degree}-s{seed}"),
        seed,
        n_vertices,
        degree,
        burn_in,
        thin,
        true_edges,
        pairs: all_pairs(n_vertices),
        samples,
    };
    ds.validate()?;
    Ok(ds)
}

/// Lag-1 autocorrelation of the per-sample magnetization; a burn-in and
/// thinning adequacy diagnostic.
pub fn magnetization_autocorrelation(ds: &IsingDataset) -> f64 {
    let m: Vec<f64> = ds
        .samples
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).sum::<f64>() / row.len() as f64)
        .collect();
    let n = m.len();
    if n < 3 {
        return 0.0;
    }
    let mean = m.iter().sum::<f64>() / n as f64;
    let var = m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    if var < 1e-12 {
        return 0.0;
    }
    let cov = m
        .windows(2)
        .map(|w| (w[0] - mean) * (w[1] - mean))
        .sum::<f64>()
        / (n - 1) as f64;
    cov / var
}
