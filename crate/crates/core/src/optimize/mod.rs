//! Learners over a Euclidean ball: a random gradient-free method
//! ([`gfn`]), an adaptive projected gradient method with an inexact
//! first-order oracle ([`agm`]), and a fixed-step projected gradient
//! baseline with fixed power depths ([`gbp`]).
//!
//! The first two are generic over the oracle traits below, so they run on
//! the ranking loss as well as on the closed-form test objectives in
//! [`crate::objectives`].

pub mod agm;
pub mod gbp;
pub mod gfn;
pub mod trace;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::graph::Ball;
use crate::oracle::{GradEstimate, LossValue, RankingObjective};

pub use agm::{train_agm, AgmConfig, AgmOutcome};
pub use gbp::{gbp_gradient, train_gbp, GbpConfig, GbpOutcome};
pub use gfn::{gradient_free, train_gfn, GfnConfig, GfnOutcome, GfnSettings};
pub use trace::{LineSearchTrial, TraceRecord, TrainTrace};

/// Function values with a requested absolute accuracy.
pub trait ZeroOrderOracle: Sync {
    fn dim(&self) -> usize;

    /// `f(x)` within `delta`; `delta == 0` asks for the exact value.
    fn value(&self, x: &[f64], delta: f64) -> Result<LossValue>;

    /// How far outside the training ball the function may be evaluated.
    fn evaluation_slack(&self) -> f64 {
        f64::INFINITY
    }
}

/// Adds gradients with a requested max-norm accuracy.
pub trait FirstOrderOracle: ZeroOrderOracle {
    fn gradient(&self, x: &[f64], delta: f64) -> Result<GradEstimate>;
}

impl ZeroOrderOracle for RankingObjective<'_> {
    fn dim(&self) -> usize {
        self.dataset().dim()
    }
    fn value(&self, x: &[f64], delta: f64) -> Result<LossValue> {
        self.loss(x, delta)
    }
    fn evaluation_slack(&self) -> f64 {
        self.radius_slack()
    }
}

impl FirstOrderOracle for RankingObjective<'_> {
    fn gradient(&self, x: &[f64], delta: f64) -> Result<GradEstimate> {
        RankingObjective::gradient(self, x, delta)
    }
}

/// Uniform sample from the unit sphere in `R^m` (normalized Gaussian).
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    assert!(m >= 1, "sphere dimension must be positive");
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = norm2(&v);
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn project_ball(x: &[f64], ball: &Ball) -> Vec<f64> {
    ball.project(x)
}

/// Prox point `Proj(x_bar - gamma g)` and reduced gradient
/// `(x_bar - x_new) / gamma`.
pub fn prox_step(x_bar: &[f64], g: &[f64], gamma: f64, ball: &Ball) -> (Vec<f64>, Vec<f64>) {
    assert!(gamma > 0.0, "prox step size must be positive");
    let trial: Vec<f64> = x_bar.iter().zip(g).map(|(x, gi)| x - gamma * gi).collect();
    if ball.distance_from_center(&trial) <= ball.radius() {
        return (trial, g.to_vec());
    }
    let x_new = ball.project(&trial);
    let g_x = x_bar.iter().zip(&x_new).map(|(a, b)| (a - b) / gamma).collect();
    (x_new, g_x)
}

/// Output of [`gf_oracle`].
#[derive(Clone, Debug, PartialEq)]
pub struct GfEstimate {
    pub vector: Vec<f64>,
    /// `f~(x)`.
    pub value: f64,
    /// `f~(x + mu xi)`.
    pub shifted_value: f64,
    pub matvecs: u64,
}

/// `(m / mu) (f~(x + mu xi) - f~(x)) xi` with both values at accuracy `delta`.
pub fn gf_oracle<O: ZeroOrderOracle + ?Sized>(oracle: &O, x: &[f64], mu: f64, delta: f64, xi: &[f64]) -> Result<GfEstimate> {
    let shifted: Vec<f64> = x.iter().zip(xi).map(|(a, b)| a + mu * b).collect();
    let f0 = oracle.value(x, delta)?;
    let f1 = oracle.value(&shifted, delta)?;
    let scale = xi.len() as f64 / mu * (f1.value - f0.value);
    Ok(GfEstimate {
        vector: xi.iter().map(|v| scale * v).collect(),
        value: f0.value,
        shifted_value: f1.value,
        matvecs: f0.matvecs + f1.matvecs,
    })
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
