use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use locsearch::baselines::brute_force_opt;
use locsearch::RestrictedConstants;
use locsearch_cli::datasets::{gen_ising, gen_regression, Dataset};
use locsearch_cli::runner::{
    certify_records, run_experiment, ExperimentSpec, RunRecord, RunnerOptions,
};

/// Exit codes: 0 success, 1 usage, 2 data error, 3 certificate failure.
#[derive(Parser)]
#[command(
    name = "locsearch",
    about = "Local search for sparse set-function maximization: datasets, runs, certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance for certificate checks.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,

    /// Worker threads for the runner (1 = fully sequential).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sparse-regression dataset (JSON).
    GenRegression(GenRegressionArgs),
    /// Generate an Ising dataset by Gibbs sampling (JSON).
    GenIsing(GenIsingArgs),
    /// Run an experiment spec: results.csv, runs.json, certs.json.
    Run(RunArgs),
    /// Re-certify saved runs against a dataset; exits 3 on any failure.
    Certify(CertifyArgs),
    /// Exact brute-force optimum for one constraint value.
    Bruteforce(BruteforceArgs),
    /// Restricted strong-concavity/smoothness constants report.
    Constants(ConstantsArgs),
}

#[derive(Args)]
struct GenRegressionArgs {
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 20)]
    features: usize,
    #[arg(long, default_value_t = 4)]
    parts: usize,
    #[arg(long, default_value_t = 2)]
    truth_per_part: usize,
    #[arg(long, default_value_t = 0.2)]
    noise_sd: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenIsingArgs {
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 200)]
    burn_in: usize,
    #[arg(long, default_value_t = 10)]
    thin: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec JSON.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Record wall-clock times (breaks byte-reproducibility of outputs).
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Args)]
struct CertifyArgs {
    /// runs.json produced by `run`.
    #[arg(long)]
    runs: PathBuf,
    /// Dataset the runs were executed against.
    #[arg(long)]
    dataset: PathBuf,
    /// Output certificates JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BruteforceArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Per-part capacity (regression datasets).
    #[arg(long)]
    capacity: Option<usize>,
    /// Degree bound (Ising datasets).
    #[arg(long)]
    b: Option<usize>,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// exact (quadratic, n <= 20), sampled, or bound (Ising).
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Sparsity levels for concavity entries, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    s: Vec<usize>,
    /// Difference sparsities for smoothness entries, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    t: Vec<usize>,
    /// Sample count per entry (sampled mode).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::GenRegression(args) => {
            let ds = Dataset::Regression(gen_regression(
                args.samples,
                args.features,
                args.parts,
                args.truth_per_part,
                args.noise_sd,
                args.seed,
            )?);
            ds.save(&args.out)?;
            println!("wrote {} ({})", args.out.display(), ds.id());
            Ok(0)
        }
        Command::GenIsing(args) => {
            let ds = Dataset::Ising(gen_ising(
                args.vertices,
                args.degree,
                args.samples,
                args.burn_in,
                args.thin,
                args.seed,
            )?);
            ds.save(&args.out)?;
            println!("wrote {} ({})", args.out.display(), ds.id());
            Ok(0)
        }
        Command::Run(args) => {
            let spec = ExperimentSpec::load(&args.spec)?;
            let opts = RunnerOptions {
                threads: cli.threads,
                timings: args.timings,
                tol: cli.tol,
            };
            let summary = run_experiment(&spec, &args.out, &opts)?;
            println!(
                "wrote {} rows to {}, {} certificates ({} failed)",
                summary.rows,
                summary.results_path.display(),
                summary.certificates,
                summary.failed_certificates
            );
            if summary.failed_certificates > 0 {
                Ok(3)
            } else {
                Ok(0)
            }
        }
        Command::Certify(args) => {
            let raw = std::fs::read_to_string(&args.runs)
                .with_context(|| format!("reading {}", args.runs.display()))?;
            let records: Vec<RunRecord> = serde_json::from_str(&raw)?;
            let ds = Dataset::load(&args.dataset)?;
            let (certs, failed) = certify_records(&records, &ds, cli.tol)?;
            std::fs::write(&args.out, serde_json::to_string_pretty(&certs)?)?;
            println!(
                "wrote {} certificates to {} ({} failed)",
                certs.len(),
                args.out.display(),
                failed
            );
            if failed > 0 {
                Ok(3)
            } else {
                Ok(0)
            }
        }
        Command::Bruteforce(args) => {
            let ds = Dataset::load(&args.dataset)?;
            let sweep = match (&ds, args.capacity, args.b) {
                (Dataset::Regression(_), Some(c), None) => c,
                (Dataset::Ising(_), None, Some(b)) => b,
                _ => bail!("pass --capacity for regression datasets or --b for Ising datasets"),
            };
            let sys = ds.system(sweep)?;
            let mut oracle = ds.oracle()?;
            let (set, value) = brute_force_opt(&mut oracle, &sys)?;
            let payload = serde_json::json!({
                "dataset_id": ds.id(),
                "sweep_value": sweep,
                "opt_set": set,
                "opt_value": value,
            });
            emit(&payload, args.out.as_deref())?;
            Ok(0)
        }
        Command::Constants(args) => {
            let ds = Dataset::load(&args.dataset)?;
            let constants = match (args.mode.as_str(), &ds) {
                ("exact", Dataset::Regression(d)) => {
                    RestrictedConstants::exact_quadratic(&d.objective()?, &args.s, &args.t)?
                }
                ("exact", Dataset::Ising(_)) => {
                    bail!("exact mode is only supported for quadratic objectives")
                }
                ("bound", Dataset::Ising(d)) => {
                    RestrictedConstants::ising_upper_bound(&d.objective()?, &args.s, &args.t)
                }
                ("bound", Dataset::Regression(_)) => {
                    bail!("bound mode is only supported for Ising datasets")
                }
                ("sampled", _) => {
                    let oracle = ds.oracle()?;
                    RestrictedConstants::sampled(
                        oracle.objective().as_ref(),
                        &args.s,
                        &args.t,
                        args.samples,
                        args.seed,
                    )
                }
                (other, _) => bail!("unknown mode '{other}' (exact | sampled | bound)"),
            };
            emit(&serde_json::to_value(&constants)?, args.out.as_deref())?;
            Ok(0)
        }
    }
}

fn emit(payload: &serde_json::Value, out: Option<&std::path::Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(payload)?;
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}
