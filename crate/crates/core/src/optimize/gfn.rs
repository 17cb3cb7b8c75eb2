//! Random gradient-free projected descent with an inexact zero-order oracle.
//!
//! Each step draws `xi` uniformly from the unit sphere, forms
//! `g = (m / mu) (f~(x + mu xi) - f~(x)) xi` and moves to
//! `Proj(x - h g)`. The output is the visited point with the smallest loss
//! estimate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::trace::{TraceRecord, TrainTrace};
use super::{gf_oracle, sample_unit_sphere, ZeroOrderOracle};
use crate::error::{Error, Result};
use crate::graph::Ball;

/// Iteration count, smoothing radius, oracle accuracy and step size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GfnSettings {
    /// Steps are indexed `0..=steps`.
    pub steps: usize,
    pub mu: f64,
    pub delta: f64,
    pub step_size: f64,
}

impl GfnSettings {
    /// Settings for a ball of radius `radius`:
    /// `M = ceil(128 m L R^2 / eps)`,
    /// `delta = eps^(3/2) sqrt(2) / (16 m R sqrt(L (m + 8)))`,
    /// `mu = sqrt(2 eps / (L (m + 8)))`, `h = 1 / (8 m L)`.
    pub fn for_ball(m: usize, lipschitz: f64, radius: f64, epsilon: f64) -> Self {
        Self::for_diameter(m, lipschitz, 2.0 * radius, epsilon)
    }

    /// Settings for a feasible set of diameter `diameter`:
    /// `M = ceil(32 m L D^2 / eps)` and the largest admissible `delta`.
    pub fn for_diameter(m: usize, lipschitz: f64, diameter: f64, epsilon: f64) -> Self {
        let mf = m as f64;
        let l = lipschitz;
        Self {
            steps: (32.0 * mf * l * diameter * diameter / epsilon).ceil() as usize,
            mu: (2.0 * epsilon / (l * (mf + 8.0))).sqrt(),
            delta: epsilon.powf(1.5) * std::f64::consts::SQRT_2 / (8.0 * mf * diameter * (l * (mf + 8.0)).sqrt()),
            step_size: 1.0 / (8.0 * mf * l),
        }
    }
}

/// Expected-gap bound after `steps` iterations:
/// `8 m L D^2 / (M + 1) + mu^2 L (m + 8) / 8 + delta m D / (4 mu) + delta^2 m / (L mu^2)`.
pub fn gfn_rate_bound(m: usize, lipschitz: f64, diameter: f64, mu: f64, delta: f64, steps: usize) -> f64 {
    let mf = m as f64;
    let l = lipschitz;
    8.0 * mf * l * diameter * diameter / (steps as f64 + 1.0)
        + mu * mu * l * (mf + 8.0) / 8.0
        + delta * mf * diameter / (4.0 * mu)
        + delta * delta * mf / (l * mu * mu)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GfnConfig {
    pub lipschitz: f64,
    pub epsilon: f64,
    pub ball: Ball,
    pub phi0: Vec<f64>,
    pub seed: u64,
    /// Replaces the step count from the formula.
    pub max_iters_override: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GfnOutcome {
    /// Visited point with the smallest loss estimate (earliest on ties).
    pub best: Vec<f64>,
    pub best_index: usize,
    pub best_value: f64,
    pub settings: GfnSettings,
    /// True when `mu` was reduced to keep perturbed points evaluable.
    pub mu_capped: bool,
    pub trace: TrainTrace,
    /// `phi_0, ..., phi_M` when requested.
    pub iterates: Option<Vec<Vec<f64>>>,
}

/// Runs the gradient-free method with the ball-based settings.
pub fn train_gfn<O: ZeroOrderOracle + ?Sized>(oracle: &O, cfg: &GfnConfig) -> Result<GfnOutcome> {
    if !(cfg.lipschitz > 0.0 && cfg.epsilon > 0.0) {
        return Err(Error::InvalidConfig("lipschitz and epsilon must be positive".into()));
    }
    let mut settings = GfnSettings::for_ball(oracle.dim(), cfg.lipschitz, cfg.ball.radius(), cfg.epsilon);
    if let Some(n) = cfg.max_iters_override {
        settings.steps = n;
    }
    gradient_free(oracle, &cfg.ball, &cfg.phi0, settings, cfg.seed, false)
}

/// The gradient-free method with explicit settings. `mu` is capped at half
/// the oracle's evaluation slack.
pub fn gradient_free<O: ZeroOrderOracle + ?Sized>(
    oracle: &O,
    ball: &Ball,
    x0: &[f64],
    mut settings: GfnSettings,
    seed: u64,
    record_iterates: bool,
) -> Result<GfnOutcome> {
    let m = oracle.dim();
    if x0.len() != m || ball.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: if x0.len() != m { x0.len() } else { ball.dim() },
        });
    }
    if !ball.contains(x0, 1e-12) {
        return Err(Error::InvalidConfig("starting point lies outside the ball".into()));
    }
    if !(settings.mu > 0.0 && settings.step_size > 0.0 && settings.delta >= 0.0) {
        return Err(Error::InvalidConfig("mu and step size must be positive".into()));
    }
    let cap = oracle.evaluation_slack() / 2.0;
    let mu_capped = settings.mu > cap;
    if mu_capped {
        settings.mu = cap;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = TrainTrace::default();
    let mut iterates = record_iterates.then(Vec::new);
    let mut x = x0.to_vec();
    let mut best = (x.clone(), 0, f64::INFINITY);
    let mut matvecs = 0;
    for k in 0..=settings.steps {
        let xi = sample_unit_sphere(&mut rng, m);
        let est = gf_oracle(oracle, &x, settings.mu, settings.delta, &xi)?;
        matvecs += est.matvecs;
        trace.push(TraceRecord {
            iteration: k,
            loss: est.value,
            delta1: settings.delta,
            delta2: None,
            step: settings.step_size,
            gx_norm: None,
            checks: 0,
            matvecs,
        });
        if est.value < best.2 {
            best = (x.clone(), k, est.value);
        }
        let next: Vec<f64> = x
            .iter()
            .zip(&est.vector)
            .map(|(a, g)| a - settings.step_size * g)
            .collect();
        let next = ball.project(&next);
        if let Some(it) = iterates.as_mut() {
            it.push(std::mem::replace(&mut x, next));
        } else {
            x = next;
        }
    }
    Ok(GfnOutcome {
        best: best.0,
        best_index: best.1,
        best_value: best.2,
        settings,
        mu_capped,
        trace,
        iterates,
    })
}
