use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sprank::dataset::{gen_synthetic, load_dataset, save_dataset, write_atomic, Dataset, SyntheticSpec};
use sprank::experiment::{compare_stationary, compare_to_csv, report_loss, run_experiment, MethodConfig, RunConfig};
use sprank::graph::{validate_feasibility, Ball, Split, TransitionModel};
use sprank::oracle::{grad_exact, grad_inexact, loss_exact, loss_inexact};
use sprank::stationary::{exact_stationary, nn_stationary, power_stationary, steps_for_stationary_accuracy, MatvecCounter};
use sprank::{beta1_bound, Error};

#[derive(Parser)]
#[command(name = "sprank", version, about = "Train and evaluate feature-weighted PageRank rankers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset file and the feasibility of a parameter ball
    Validate {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Write a random dataset
    GenSynthetic(GenArgs),
    /// Print stationary distributions and node orderings
    Rank {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        /// Only this query
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value_t = Solver::Nn)]
        solver: Solver,
        /// Iterations for the nn and power solvers
        #[arg(long, conflicts_with = "accuracy")]
        steps: Option<usize>,
        /// 1-norm accuracy for the nn solver
        #[arg(long, default_value_t = 1e-10)]
        accuracy: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Loss value; exact when no accuracy is given
    Loss {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long, value_enum, default_value_t = SplitArg::All)]
        split: SplitArg,
    },
    /// Loss gradient; exact when no accuracy is given
    Grad {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long)]
        delta2: Option<f64>,
        #[arg(long, value_enum, default_value_t = SplitArg::All)]
        split: SplitArg,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Train on the train split and evaluate on the test split
    Train(TrainArgs),
    /// Loss on each split at a parameter vector
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
    },
    /// Error of truncated-series and power iterations against the dense solve
    CompareStationary {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        phi: PhiArgs,
        #[arg(long, default_value_t = 100)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct BallArgs {
    /// Ball center as comma-separated values (default: all ones)
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.99)]
    radius: f64,
}

impl BallArgs {
    fn ball(&self, m: usize) -> Result<Ball, Error> {
        let center = self.center.clone().unwrap_or_else(|| vec![1.0; m]);
        if center.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: center.len(),
            });
        }
        Ball::new(center, self.radius)
    }
}

#[derive(Args)]
struct PhiArgs {
    /// Parameters as comma-separated values (default: all ones)
    #[arg(long, value_delimiter = ',', conflicts_with = "phi_file")]
    phi: Option<Vec<f64>>,
    /// JSON file holding an array, or an object with a `phi` array
    #[arg(long)]
    phi_file: Option<PathBuf>,
}

impl PhiArgs {
    fn resolve(&self, m: usize) -> Result<Vec<f64>, Error> {
        let phi = match (&self.phi, &self.phi_file) {
            (Some(p), _) => p.clone(),
            (None, Some(path)) => read_phi_file(path)?,
            (None, None) => vec![1.0; m],
        };
        if phi.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: phi.len(),
            });
        }
        Ok(phi)
    }
}

fn read_phi_file(path: &Path) -> Result<Vec<f64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let parse_err = |message: String| Error::Parse {
        path: path.to_path_buf(),
        message,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
    let array = value.get("phi").cloned().unwrap_or(value);
    serde_json::from_value(array).map_err(|e| parse_err(format!("expected an array of numbers: {e}")))
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    queries: usize,
    #[arg(long, default_value_t = 30)]
    nodes: usize,
    #[arg(long, default_value_t = 3)]
    max_outdegree: usize,
    #[arg(long, default_value_t = 3)]
    m1: usize,
    #[arg(long, default_value_t = 3)]
    m2: usize,
    #[arg(long, default_value_t = 10)]
    judgments: usize,
    #[arg(long, default_value_t = 0.15)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0.01)]
    margin_max: f64,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long)]
    seed: u64,
    /// Per-iteration CSV
    #[arg(long)]
    trace: PathBuf,
    /// Run summary JSON
    #[arg(long)]
    summary: PathBuf,
    /// Line-search trials CSV (agm only)
    #[arg(long)]
    trials: Option<PathBuf>,
    #[command(flatten)]
    ball: BallArgs,
    #[command(flatten)]
    phi: PhiArgs,
    /// Lipschitz constant (gfn) or its initial estimate (agm)
    #[arg(long, default_value_t = 1e-4)]
    lipschitz: f64,
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Iteration cap: replaces the gfn step count, bounds agm and gbp
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value_t = 100.0)]
    step_size: f64,
    #[arg(long, default_value_t = 100)]
    n1: usize,
    #[arg(long, default_value_t = 100)]
    n2: usize,
    #[arg(long, default_value_t = 1e-5)]
    stop_tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gfn,
    Agm,
    Gbp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Nn,
    Power,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    All,
    Train,
    Test,
}

fn select(dataset: &Dataset, split: SplitArg) -> Dataset {
    match split {
        SplitArg::All => dataset.clone(),
        SplitArg::Train => dataset.split(Split::Train),
        SplitArg::Test => dataset.split(Split::Test),
    }
}

enum Failure {
    Data(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn print_json(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    let mut out = std::io::stdout().lock();
    // a closed pipe just means the reader stopped early
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { data, ball } => {
            let dataset = load_dataset(&data)?;
            let ball = ball.ball(dataset.dim())?;
            let report = validate_feasibility(dataset.queries(), &ball);
            let beta1 = beta1_bound(dataset.queries(), &ball, dataset.alpha()).ok().map(|b| b.value);
            print_json(&json!({
                "queries": dataset.queries().len(),
                "m1": dataset.m1(),
                "m2": dataset.m2(),
                "alpha": dataset.alpha(),
                "max_nodes": dataset.max_nodes(),
                "max_judgments": dataset.max_judgments(),
                "feasible": report.passed(),
                "radius_slack": report.radius_slack,
                "beta1": beta1,
                "failures": report.failures.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }));
            if !report.passed() {
                return Err(Failure::Data("ball is not feasible for this dataset".into()));
            }
        }
        Command::GenSynthetic(a) => {
            let spec = SyntheticSpec {
                num_queries: a.queries,
                nodes: a.nodes,
                max_outdegree: a.max_outdegree,
                m1: a.m1,
                m2: a.m2,
                judgments: a.judgments,
                seed: a.seed,
                alpha: a.alpha,
                test_fraction: a.test_fraction,
                margin_max: a.margin_max,
            };
            let dataset = gen_synthetic(&spec)?;
            save_dataset(&dataset, &a.out)?;
        }
        Command::Rank {
            data,
            phi,
            query,
            solver,
            steps,
            accuracy,
            out,
        } => {
            let dataset = load_dataset(&data)?;
            let phi = phi.resolve(dataset.dim())?;
            let alpha = dataset.alpha();
            let steps = steps.unwrap_or_else(|| steps_for_stationary_accuracy(alpha, accuracy));
            let mut results = Vec::new();
            for g in dataset.queries() {
                if query.as_deref().is_some_and(|q| q != g.id()) {
                    continue;
                }
                let tm = TransitionModel::new(g, &phi)?;
                let mut counter = MatvecCounter::new();
                let pi = match solver {
                    Solver::Nn => nn_stationary(&tm, alpha, steps, &mut counter),
                    Solver::Power => power_stationary(&tm, alpha, steps, &mut counter),
                    Solver::Exact => exact_stationary(&tm, alpha)?,
                };
                results.push(json!({
                    "id": g.id(),
                    "order": pi.ranking(),
                    "scores": pi.as_slice(),
                    "matvecs": counter.get(),
                }));
            }
            if let Some(q) = query {
                if results.is_empty() {
                    return Err(Failure::Data(format!("no query with id `{q}`")));
                }
            }
            let value = json!({ "queries": results });
            match out {
                Some(path) => write_json(&path, &value)?,
                None => print_json(&value),
            }
        }
        Command::Loss { data, phi, delta1, split } => {
            let dataset = select(&load_dataset(&data)?, split);
            let phi = phi.resolve(dataset.dim())?;
            let v = match delta1 {
                Some(d) => loss_inexact(&dataset, &phi, d)?,
                None => loss_exact(&dataset, &phi)?,
            };
            print_json(&json!(v));
        }
        Command::Grad {
            data,
            phi,
            delta2,
            split,
            ball,
        } => {
            let dataset = select(&load_dataset(&data)?, split);
            let phi = phi.resolve(dataset.dim())?;
            let g = match delta2 {
                Some(d) => {
                    let ball = ball.ball(dataset.dim())?;
                    let beta1 = beta1_bound(dataset.queries(), &ball, dataset.alpha())?;
                    grad_inexact(&dataset, &phi, d, beta1.value)?
                }
                None => grad_exact(&dataset, &phi)?,
            };
            print_json(&json!(g));
        }
        Command::Train(a) => {
            let dataset = load_dataset(&a.data)?;
            let method = match a.method {
                MethodArg::Gfn => MethodConfig::Gfn {
                    lipschitz: a.lipschitz,
                    epsilon: a.epsilon,
                    max_iters: a.max_iters,
                },
                MethodArg::Agm => MethodConfig::Agm {
                    l0: a.lipschitz,
                    epsilon: a.epsilon,
                    max_outer_iters: a.max_iters.unwrap_or(1000),
                },
                MethodArg::Gbp => MethodConfig::Gbp {
                    step_size: a.step_size,
                    n1: a.n1,
                    n2: a.n2,
                    stop_tol: a.stop_tol,
                    max_iters: a.max_iters.unwrap_or(1000),
                },
            };
            let phi0 = match (&a.phi.phi, &a.phi.phi_file) {
                (None, None) => None,
                _ => Some(a.phi.resolve(dataset.dim())?),
            };
            let cfg = RunConfig {
                method,
                ball: a.ball.ball(dataset.dim())?,
                phi0,
                seed: a.seed,
            };
            let out = run_experiment(&dataset, &cfg)?;
            out.trace.write_csv(&a.trace)?;
            if let Some(path) = &a.trials {
                out.trace.write_trials_csv(path)?;
            }
            write_json(&a.summary, &json!(out.summary))?;
            eprintln!(
                "{}: {} iterations, train loss {:.6e} -> {:.6e}",
                out.summary.method, out.summary.iterations, out.summary.initial_train_loss, out.summary.final_train_loss
            );
        }
        Command::Evaluate { data, phi } => {
            let dataset = load_dataset(&data)?;
            let phi = phi.resolve(dataset.dim())?;
            print_json(&json!({
                "phi": phi,
                "all": report_loss(&dataset, &phi)?,
                "train": report_loss(&dataset.split(Split::Train), &phi)?,
                "test": report_loss(&dataset.split(Split::Test), &phi)?,
            }));
        }
        Command::CompareStationary { data, phi, max_n, out } => {
            let dataset = load_dataset(&data)?;
            let phi = phi.resolve(dataset.dim())?;
            let rows = compare_stationary(&dataset, &phi, max_n)?;
            write_atomic(&out, compare_to_csv(&rows)?.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
