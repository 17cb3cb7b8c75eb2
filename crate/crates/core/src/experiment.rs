//! Training runs on a dataset's train split with evaluation on its test
//! split, and the truncated-series versus power-iteration comparison.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::{Ball, Split, TransitionModel};
use crate::optimize::gfn::GfnSettings;
use crate::optimize::trace::{finish_csv, fmt_f64};
use crate::optimize::{train_agm, train_gbp, train_gfn, AgmConfig, GbpConfig, GfnConfig, TrainTrace};
use crate::oracle::{loss_from_vectors, loss_inexact, RankingObjective};
use crate::stationary::{exact_stationary, nn_stationary, power_stationary, MatvecCounter};

/// Accuracy of the losses reported in run summaries.
pub const REPORT_ACCURACY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum MethodConfig {
    Gfn {
        lipschitz: f64,
        epsilon: f64,
        max_iters: Option<usize>,
    },
    Agm {
        l0: f64,
        epsilon: f64,
        max_outer_iters: usize,
    },
    Gbp {
        step_size: f64,
        n1: usize,
        n2: usize,
        stop_tol: f64,
        max_iters: usize,
    },
}

impl MethodConfig {
    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Gfn { .. } => "gfn",
            MethodConfig::Agm { .. } => "agm",
            MethodConfig::Gbp { .. } => "gbp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: MethodConfig,
    pub ball: Ball,
    /// Starting point; the ball's center when absent.
    pub phi0: Option<Vec<f64>>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub method: String,
    pub seed: u64,
    pub iterations: usize,
    pub train_queries: usize,
    pub test_queries: usize,
    pub initial_train_loss: f64,
    pub final_train_loss: f64,
    pub initial_test_loss: Option<f64>,
    pub final_test_loss: Option<f64>,
    pub total_matvecs: u64,
    pub wall_time_secs: f64,
    pub beta1: f64,
    pub phi: Vec<f64>,
    /// Adaptive method: smallest reduced gradient norm and its square.
    pub z: Option<f64>,
    pub z_squared: Option<f64>,
    /// Adaptive method: true when the iteration cap ended the run first.
    pub exhausted: Option<bool>,
    /// Gradient-free method: the settings used.
    pub gfn_settings: Option<GfnSettings>,
    pub gfn_mu_capped: Option<bool>,
    /// Baseline: true when the loss-decrease test ended the run.
    pub stopped_by_rule: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub trace: TrainTrace,
}

/// Loss within [`REPORT_ACCURACY`], or `None` for an empty dataset.
pub fn report_loss(dataset: &Dataset, phi: &[f64]) -> Result<Option<f64>> {
    if dataset.is_empty() {
        return Ok(None);
    }
    Ok(Some(loss_inexact(dataset, phi, REPORT_ACCURACY)?.value))
}

/// Trains on the train split and evaluates on both splits.
pub fn run_experiment(dataset: &Dataset, cfg: &RunConfig) -> Result<RunOutput> {
    let train = dataset.split(Split::Train);
    let test = dataset.split(Split::Test);
    if train.is_empty() {
        return Err(Error::InvalidConfig("dataset has no train queries".into()));
    }
    let phi0 = cfg.phi0.clone().unwrap_or_else(|| cfg.ball.center().to_vec());
    let objective = RankingObjective::new(&train, cfg.ball.clone())?;
    let start = Instant::now();

    let mut summary = RunSummary {
        method: cfg.method.name().to_string(),
        seed: cfg.seed,
        iterations: 0,
        train_queries: train.queries().len(),
        test_queries: test.queries().len(),
        initial_train_loss: report_loss(&train, &phi0)?.unwrap_or(0.0),
        final_train_loss: 0.0,
        initial_test_loss: report_loss(&test, &phi0)?,
        final_test_loss: None,
        total_matvecs: 0,
        wall_time_secs: 0.0,
        beta1: objective.beta1().value,
        phi: Vec::new(),
        z: None,
        z_squared: None,
        exhausted: None,
        gfn_settings: None,
        gfn_mu_capped: None,
        stopped_by_rule: None,
    };

    let (phi, trace) = match &cfg.method {
        MethodConfig::Gfn {
            lipschitz,
            epsilon,
            max_iters,
        } => {
            let out = train_gfn(
                &objective,
                &GfnConfig {
                    lipschitz: *lipschitz,
                    epsilon: *epsilon,
                    ball: cfg.ball.clone(),
                    phi0,
                    seed: cfg.seed,
                    max_iters_override: *max_iters,
                },
            )?;
            summary.iterations = out.settings.steps;
            summary.gfn_settings = Some(out.settings);
            summary.gfn_mu_capped = Some(out.mu_capped);
            (out.best, out.trace)
        }
        MethodConfig::Agm {
            l0,
            epsilon,
            max_outer_iters,
        } => {
            let out = train_agm(
                &objective,
                &AgmConfig {
                    l0: *l0,
                    epsilon: *epsilon,
                    ball: cfg.ball.clone(),
                    phi0,
                    max_outer_iters: *max_outer_iters,
                },
            )?;
            summary.iterations = out.iterations;
            summary.z = Some(out.z);
            summary.z_squared = Some(out.z * out.z);
            summary.exhausted = Some(out.exhausted());
            (out.output, out.trace)
        }
        MethodConfig::Gbp {
            step_size,
            n1,
            n2,
            stop_tol,
            max_iters,
        } => {
            let out = train_gbp(
                &objective,
                &GbpConfig {
                    step_size: *step_size,
                    n1: *n1,
                    n2: *n2,
                    stop_tol: *stop_tol,
                    max_iters: *max_iters,
                    ball: cfg.ball.clone(),
                    phi0,
                },
            )?;
            summary.iterations = out.iterations;
            summary.stopped_by_rule = Some(out.stopped_by_rule);
            (out.output, out.trace)
        }
    };
    summary.wall_time_secs = start.elapsed().as_secs_f64();
    summary.total_matvecs = trace.total_matvecs();
    summary.final_train_loss = report_loss(&train, &phi)?.unwrap_or(0.0);
    summary.final_test_loss = report_loss(&test, &phi)?;
    summary.phi = phi;
    Ok(RunOutput { summary, trace })
}

/// One row of the stationary-solver comparison. Errors are 1-norm
/// distances to the dense solution, maximized over queries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub nn_error: f64,
    pub power_error: f64,
    pub nn_loss: f64,
    pub power_loss: f64,
    /// `2 (1 - alpha)^(N + 1)`.
    pub nn_bound: f64,
    /// `2 (1 - alpha)^N`.
    pub power_bound: f64,
}

pub const COMPARE_HEADER: [&str; 7] = [
    "n",
    "nn_error",
    "power_error",
    "nn_loss",
    "power_loss",
    "nn_bound",
    "power_bound",
];

/// Errors and losses of both approximations for `N = 0..=max_n`.
pub fn compare_stationary(dataset: &Dataset, phi: &[f64], max_n: usize) -> Result<Vec<CompareRow>> {
    if dataset.is_empty() {
        return Err(Error::InvalidConfig("dataset has no queries".into()));
    }
    let alpha = dataset.alpha();
    // per query, per N: (nn vector, power vector, nn error, power error)
    type Series = Vec<(Vec<f64>, Vec<f64>, f64, f64)>;
    let per_query: Vec<Series> = dataset
        .queries()
        .par_iter()
        .map(|g| {
            let tm = TransitionModel::new(g, phi)?;
            let exact = exact_stationary(&tm, alpha).map_err(|e| match e {
                Error::OverDenseCap { nodes, cap, .. } => Error::OverDenseCap {
                    query: g.id().to_string(),
                    nodes,
                    cap,
                },
                e => e,
            })?;
            let mut counter = MatvecCounter::new();
            Ok((0..=max_n)
                .map(|n| {
                    let nn = nn_stationary(&tm, alpha, n, &mut counter);
                    let pw = power_stationary(&tm, alpha, n, &mut counter);
                    let (en, ep) = (nn.l1_distance(&exact), pw.l1_distance(&exact));
                    (nn.0, pw.0, en, ep)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows = (0..=max_n)
        .map(|n| {
            let nn: Vec<Vec<f64>> = per_query.iter().map(|s| s[n].0.clone()).collect();
            let pw: Vec<Vec<f64>> = per_query.iter().map(|s| s[n].1.clone()).collect();
            CompareRow {
                n,
                nn_error: per_query.iter().map(|s| s[n].2).fold(0.0, f64::max),
                power_error: per_query.iter().map(|s| s[n].3).fold(0.0, f64::max),
                nn_loss: loss_from_vectors(dataset, &nn),
                power_loss: loss_from_vectors(dataset, &pw),
                nn_bound: 2.0 * (1.0 - alpha).powi(n as i32 + 1),
                power_bound: 2.0 * (1.0 - alpha).powi(n as i32),
            }
        })
        .collect();
    Ok(rows)
}

pub fn compare_to_csv(rows: &[CompareRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COMPARE_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            fmt_f64(r.nn_error),
            fmt_f64(r.power_error),
            fmt_f64(r.nn_loss),
            fmt_f64(r.power_loss),
            fmt_f64(r.nn_bound),
            fmt_f64(r.power_bound),
        ])?;
    }
    finish_csv(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_synthetic, SyntheticSpec};

    #[test]
    fn compare_rows() {
        let d = gen_synthetic(&SyntheticSpec::default()).unwrap();
        let rows = compare_stationary(&d, &vec![1.0; d.dim()], 30).unwrap();
        assert_eq!(rows.len(), 31);
        assert_eq!(rows[0].nn_error, rows[0].power_error);
        for r in &rows {
            assert!(r.nn_error <= r.nn_bound && r.power_error <= r.power_bound);
        }
        assert!(rows.windows(2).all(|w| w[1].power_error <= w[0].power_error));
    }

    #[test]
    fn untrained_run_reports_initial_loss() {
        let d = gen_synthetic(&SyntheticSpec {
            num_queries: 4,
            test_fraction: 0.5,
            ..Default::default()
        })
        .unwrap();
        let cfg = RunConfig {
            method: MethodConfig::Gfn {
                lipschitz: 1e-4,
                epsilon: 1e-6,
                max_iters: Some(0),
            },
            ball: d.default_ball(),
            phi0: None,
            seed: 1,
        };
        let out = run_experiment(&d, &cfg).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.summary.phi, vec![1.0; d.dim()]);
        assert_eq!(out.summary.final_train_loss, out.summary.initial_train_loss);
        assert!(out.summary.final_test_loss.is_some());
    }
}
