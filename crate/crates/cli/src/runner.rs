//! Experiment orchestration: sweep × trial × algorithm grids, results CSV,
//! run records, and certificates.
//!
//! Outputs are byte-identical across runs for a fixed spec: tasks execute
//! in a deterministic order (or are collected into one), and wall-clock
//! columns are zeroed unless timing is explicitly requested.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use locsearch::baselines::{brute_force_opt, greedy, modular_approximation, random_selection};
use locsearch::certify::{certify_run, Certificate, CertificateStatus};
use locsearch::search::{exchange_size, AlgorithmKind};
use locsearch::{
    geometric_local_search, matroid_local_search, system_local_search, RestrictedConstants,
    RunConfig, RunReport, SetOracle, StopReason, Variant,
};

use crate::datasets::{gen_ising, gen_regression, Dataset};

pub const SPEC_SCHEMA_VERSION: u32 = 1;

/// Where the runner gets its data: a dataset file shared by all trials, or
/// a generator re-seeded per trial (`seed + trial`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum DatasetSource {
    File {
        path: String,
    },
    Regression {
        n_samples: usize,
        n_features: usize,
        n_parts: usize,
        truth_per_part: usize,
        noise_sd: f64,
        seed: u64,
    },
    Ising {
        n_vertices: usize,
        degree: usize,
        n_samples: usize,
        burn_in: usize,
        thin: usize,
        seed: u64,
    },
}

/// One algorithm to run at every grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    /// `local-search`, `geometric`, `greedy`, `modular`, or `random`.
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    pub id: String,
    pub dataset: DatasetSource,
    /// Partition capacities (regression) or degree bounds (Ising).
    pub sweep: Vec<usize>,
    pub trials: usize,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Absolute tolerance for certificates; defaults to 1e-7.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Compute brute-force optima; defaults to yes for regression with at
    /// most 20 features, no otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compute_opt: Option<bool>,
    /// Emit certificates (requires optima and constants); defaults to off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<bool>,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("reading spec {}", path.display()))?;
        let spec: ExperimentSpec =
            serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
        if spec.schema_version != SPEC_SCHEMA_VERSION {
            bail!("unsupported spec schema version {}", spec.schema_version);
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunnerOptions {
    pub threads: usize,
    /// Record wall-clock times; off by default so outputs are reproducible.
    pub timings: bool,
    pub tol: f64,
}

impl Default for RunnerOptions {
    fn default() -> Self {
        RunnerOptions {
            threads: 1,
            timings: false,
            tol: 1e-7,
        }
    }
}

/// One row of results.csv.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset_id: String,
    pub sweep_value: usize,
    pub trial: usize,
    pub algorithm: String,
    pub variant: String,
    pub q: Option<usize>,
    pub final_value: f64,
    pub opt_value: Option<f64>,
    pub ratio: Option<f64>,
    pub iterations: usize,
    pub f_calls: u64,
    pub grad_calls: u64,
    pub wall_ms: f64,
    pub stop_reason: StopReason,
}

/// Everything needed to re-certify a run later.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset_id: String,
    pub sweep_value: usize,
    pub trial: usize,
    pub report: RunReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub dataset_id: String,
    pub sweep_value: usize,
    pub trial: usize,
    pub algorithm: String,
    pub variant: String,
    pub certificate: Certificate,
}

#[derive(Debug)]
pub struct RunSummary {
    pub rows: usize,
    pub certificates: usize,
    pub failed_certificates: usize,
    pub results_path: PathBuf,
    pub runs_path: PathBuf,
    pub certs_path: PathBuf,
}

pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    opts: &RunnerOptions,
) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;

    // Per-trial datasets, generated or loaded up front.
    let datasets: Vec<Arc<Dataset>> = (0..spec.trials.max(1))
        .map(|trial| resolve_dataset(&spec.dataset, trial).map(Arc::new))
        .collect::<Result<_>>()?;

    let tol = spec.tol.unwrap_or(opts.tol);
    let want_certs = spec.certify.unwrap_or(false);
    let compute_opt = spec.compute_opt.unwrap_or_else(|| {
        matches!(datasets[0].as_ref(), Dataset::Regression(_)) && datasets[0].n_elements() <= 20
    });

    // Task grid in deterministic order.
    struct Task {
        trial: usize,
        sweep: usize,
        algo: usize,
    }
    let mut tasks = Vec::new();
    for (trial, _) in datasets.iter().enumerate() {
        for &sweep in &spec.sweep {
            for algo in 0..spec.algorithms.len() {
                tasks.push(Task { trial, sweep, algo });
            }
        }
    }

    // Brute-force optima per (trial, sweep), shared across algorithms.
    let mut optima: Vec<Option<f64>> = Vec::new();
    if compute_opt {
        for ds in &datasets {
            for &sweep in &spec.sweep {
                let mut oracle = ds.oracle()?;
                let sys = ds.system(sweep)?;
                let (_, opt) = brute_force_opt(&mut oracle, &sys)?;
                optima.push(Some(opt));
            }
        }
    } else {
        optima.resize(datasets.len() * spec.sweep.len(), None);
    }
    let opt_of = |trial: usize, sweep_idx: usize| optima[trial * spec.sweep.len() + sweep_idx];

    // Constants per trial, computed when any algorithm needs them.
    let needs_constants = want_certs
        || spec.algorithms.iter().any(|a| {
            a.id == "local-search" && a.variant == Some(Variant::NonOblivious)
                || a.id == "geometric" && a.variant == Some(Variant::NonOblivious)
        });
    let constants: Vec<Option<Arc<RestrictedConstants>>> = if needs_constants {
        datasets
            .iter()
            .map(|ds| trial_constants(ds, &spec.sweep, want_certs).map(|c| c.map(Arc::new)))
            .collect::<Result<_>>()?
    } else {
        vec![None; datasets.len()]
    };

    let run_one = |task: &Task| -> Result<(ResultRow, RunRecord, Option<CertificateRecord>)> {
        let ds = &datasets[task.trial];
        let algo = &spec.algorithms[task.algo];
        let sys = ds.system(task.sweep)?;
        let mut oracle = ds.oracle()?;
        let consts = constants[task.trial].as_deref();
        let started = Instant::now();
        let mut report =
            dispatch_algorithm(algo, &mut oracle, ds, &sys, task.trial, task.sweep, consts)?;
        let wall_ms = if opts.timings {
            started.elapsed().as_secs_f64() * 1e3
        } else {
            // Zeroed so that results and run records are byte-reproducible.
            report.wall_ms = 0.0;
            0.0
        };

        let sweep_idx = spec.sweep.iter().position(|&s| s == task.sweep).unwrap();
        let opt_value = opt_of(task.trial, sweep_idx);
        let ratio = match opt_value {
            Some(opt) if opt > tol => Some(report.final_value / opt),
            _ => None,
        };
        let row = ResultRow {
            dataset_id: ds.id().to_string(),
            sweep_value: task.sweep,
            trial: task.trial,
            algorithm: algo.id.clone(),
            variant: report.variant.map(|v| v.name().to_string()).unwrap_or_default(),
            q: report.q,
            final_value: report.final_value,
            opt_value,
            ratio,
            iterations: report.iterations_used,
            f_calls: report.f_calls,
            grad_calls: report.grad_calls,
            wall_ms,
            stop_reason: report.stop_reason,
        };
        let cert = if want_certs && opt_value.is_some() {
            certify_run(&report, &oracle, &sys, consts, tol)?.map(|certificate| {
                CertificateRecord {
                    dataset_id: ds.id().to_string(),
                    sweep_value: task.sweep,
                    trial: task.trial,
                    algorithm: algo.id.clone(),
                    variant: row.variant.clone(),
                    certificate,
                }
            })
        } else {
            None
        };
        let record = RunRecord {
            dataset_id: ds.id().to_string(),
            sweep_value: task.sweep,
            trial: task.trial,
            report,
        };
        Ok((row, record, cert))
    };

    let outcomes: Vec<(ResultRow, RunRecord, Option<CertificateRecord>)> = if opts.threads <= 1 {
        tasks.iter().map(run_one).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .context("building thread pool")?;
        pool.install(|| tasks.par_iter().map(run_one).collect::<Result<_>>())?
    };

    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut certs = Vec::new();
    for (row, record, cert) in outcomes {
        rows.push(row);
        records.push(record);
        certs.extend(cert);
    }

    let results_path = out_dir.join("results.csv");
    let mut writer = csv::Writer::from_path(&results_path)
        .with_context(|| format!("writing {}", results_path.display()))?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;

    let runs_path = out_dir.join("runs.json");
    std::fs::write(&runs_path, serde_json::to_string_pretty(&records)?)?;

    let certs_path = out_dir.join("certs.json");
    std::fs::write(&certs_path, serde_json::to_string_pretty(&certs)?)?;

    let failed = certs
        .iter()
        .filter(|c| c.certificate.status == CertificateStatus::Fail)
        .count();
    Ok(RunSummary {
        rows: rows.len(),
        certificates: certs.len(),
        failed_certificates: failed,
        results_path,
        runs_path,
        certs_path,
    })
}

/// Deterministic seed for the random-selection baseline at one grid point.
fn baseline_seed(ds: &Dataset, trial: usize, sweep: usize) -> u64 {
    let base = match ds {
        Dataset::Regression(d) => d.seed,
        Dataset::Ising(d) => d.seed,
    };
    base.wrapping_mul(1_000_003)
        .wrapping_add(trial as u64 * 1_009)
        .wrapping_add(sweep as u64)
}

fn resolve_dataset(source: &DatasetSource, trial: usize) -> Result<Dataset> {
    match source {
        DatasetSource::File { path } => Dataset::load(Path::new(path)),
        DatasetSource::Regression {
            n_samples,
            n_features,
            n_parts,
            truth_per_part,
            noise_sd,
            seed,
        } => Ok(Dataset::Regression(gen_regression(
            *n_samples,
            *n_features,
            *n_parts,
            *truth_per_part,
            *noise_sd,
            seed + trial as u64,
        )?)),
        DatasetSource::Ising {
            n_vertices,
            degree,
            n_samples,
            burn_in,
            thin,
            seed,
        } => Ok(Dataset::Ising(gen_ising(
            *n_vertices,
            *degree,
            *n_samples,
            *burn_in,
            *thin,
            seed + trial as u64,
        )?)),
    }
}

/// Restricted constants for one trial dataset: exact for regression (keys
/// sized to the sweep), the norm-cube upper bound for Ising.
fn trial_constants(
    ds: &Dataset,
    sweep: &[usize],
    full: bool,
) -> Result<Option<RestrictedConstants>> {
    match ds {
        Dataset::Regression(d) => {
            let obj = d.objective()?;
            let n = d.n_features;
            let mut m_keys = vec![1];
            let mut t_keys = vec![1, 2];
            if full {
                for &cap in sweep {
                    let rank = d.system(cap)?.rank();
                    m_keys.push(rank.min(n));
                    m_keys.push((2 * rank).min(n));
                    t_keys.push(rank.min(n));
                }
            } else {
                m_keys.push(n);
            }
            m_keys.sort_unstable();
            m_keys.dedup();
            t_keys.sort_unstable();
            t_keys.dedup();
            Ok(Some(RestrictedConstants::exact_quadratic(
                &obj, &m_keys, &t_keys,
            )?))
        }
        Dataset::Ising(d) => {
            let obj = d.objective()?;
            let mut t_keys = Vec::new();
            let mut s_keys = Vec::new();
            for &b in sweep {
                let sys = d.system(b)?;
                s_keys.push(sys.rank().max(1));
                t_keys.push(exchange_size(&sys, 1)?);
                t_keys.push(exchange_size(&sys, 2)?);
            }
            s_keys.sort_unstable();
            s_keys.dedup();
            t_keys.sort_unstable();
            t_keys.dedup();
            Ok(Some(RestrictedConstants::ising_upper_bound(
                &obj, &s_keys, &t_keys,
            )))
        }
    }
}

fn dispatch_algorithm(
    algo: &AlgorithmSpec,
    oracle: &mut SetOracle,
    ds: &Dataset,
    sys: &locsearch::IndependenceSystem,
    trial: usize,
    sweep: usize,
    constants: Option<&RestrictedConstants>,
) -> Result<RunReport> {
    let q = algo.q.unwrap_or(1);
    let max_iterations = algo.max_iterations.unwrap_or(10 * sys.n().max(10));
    match algo.id.as_str() {
        "local-search" => {
            let variant = algo
                .variant
                .ok_or_else(|| anyhow::anyhow!("local-search needs a variant"))?;
            let cfg = RunConfig {
                variant,
                max_iterations,
                q,
                epsilon: None,
                record_trajectory: false,
            };
            let report = if sys.is_matroid() {
                matroid_local_search(oracle, sys, &cfg, constants)?
            } else {
                system_local_search(oracle, sys, &cfg, constants)?
            };
            Ok(report)
        }
        "geometric" => {
            let variant = algo.variant.unwrap_or(Variant::Oblivious);
            let epsilon = algo
                .epsilon
                .ok_or_else(|| anyhow::anyhow!("geometric needs epsilon"))?;
            let cfg = RunConfig {
                variant,
                max_iterations,
                q,
                epsilon: Some(epsilon),
                record_trajectory: false,
            };
            Ok(geometric_local_search(oracle, sys, &cfg, constants)?)
        }
        "greedy" => Ok(greedy(oracle, sys)?),
        "modular" => Ok(modular_approximation(oracle, sys, q)?),
        "random" => {
            let seed = baseline_seed(ds, trial, sweep);
            let set = random_selection(sys, seed)?;
            let value = oracle.value(&set)?;
            let counters = oracle.counters();
            Ok(RunReport {
                algorithm: AlgorithmKind::RandomSelection,
                variant: None,
                q: None,
                epsilon: None,
                final_set: set,
                final_value: value,
                iterations_used: 0,
                stop_reason: StopReason::LocalOptimum,
                constant_used: None,
                f_calls: counters.f_calls,
                grad_calls: counters.grad_calls,
                wall_ms: 0.0,
                trajectory: Vec::new(),
            })
        }
        other => bail!("unknown algorithm id '{other}'"),
    }
}

/// Re-certifies saved run records against a dataset. Returns the records
/// and the number of failures.
pub fn certify_records(
    records: &[RunRecord],
    ds: &Dataset,
    tol: f64,
) -> Result<(Vec<CertificateRecord>, usize)> {
    let sweeps: Vec<usize> = {
        let mut s: Vec<usize> = records.iter().map(|r| r.sweep_value).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let constants = trial_constants(ds, &sweeps, true)?;
    let mut out = Vec::new();
    let mut failed = 0;
    for record in records {
        let sys = ds.system(record.sweep_value)?;
        let oracle = ds.oracle()?;
        let cert = certify_run(
            &record.report,
            &oracle,
            &sys,
            constants.as_ref(),
            tol,
        )?;
        if let Some(certificate) = cert {
            if certificate.status == CertificateStatus::Fail {
                failed += 1;
            }
            out.push(CertificateRecord {
                dataset_id: record.dataset_id.clone(),
                sweep_value: record.sweep_value,
                trial: record.trial,
                algorithm: record.report.algorithm.name().to_string(),
                variant: record
                    .report
                    .variant
                    .map(|v| v.name().to_string())
                    .unwrap_or_default(),
                certificate,
            });
        }
    }
    Ok((out, failed))
}
