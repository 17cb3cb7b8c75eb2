//! Adaptive projected gradient method with an inexact first-order oracle.
//!
//! Each outer step searches for a local Lipschitz estimate `M_k`, starting
//! from half the previously accepted one and doubling until
//!
//! ```text
//! f~(w) <= f~(x) + <g~, w - x> + M_k/2 ||w - x||^2 + eps / (8 M_k)
//! ```
//!
//! holds for `w = Proj(x - g~ / M_k)`. Oracle accuracies shrink with `M_k`:
//! `delta1 = eps / (32 M_k)` and `delta2 = eps / (64 M_k R sqrt(m))`. The
//! method stops once the smallest reduced gradient norm seen is at most `eps`.

use serde::{Deserialize, Serialize};

use super::trace::{LineSearchTrial, TraceRecord, TrainTrace};
use super::{dot, norm2, prox_step, FirstOrderOracle};
use crate::error::{Error, Result};
use crate::graph::Ball;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgmConfig {
    /// Initial Lipschitz estimate.
    pub l0: f64,
    pub epsilon: f64,
    pub ball: Ball,
    pub phi0: Vec<f64>,
    pub max_outer_iters: usize,
}

#[derive(Clone, Debug)]
pub struct AgmOutcome {
    /// The iterate following the step with the smallest reduced gradient.
    pub output: Vec<f64>,
    /// Index of that step.
    pub best_index: usize,
    /// Smallest `||g_X||_2` seen.
    pub z: f64,
    /// True when `z <= eps` was reached.
    pub converged: bool,
    pub iterations: usize,
    pub total_checks: usize,
    /// Accepted `M_k` per outer step.
    pub accepted: Vec<f64>,
    /// `||g_X||_2` per outer step.
    pub gx_norms: Vec<f64>,
    /// `phi_0, ..., phi_K`, the points the reduced gradients were taken at.
    pub iterates: Vec<Vec<f64>>,
    pub trace: TrainTrace,
}

impl AgmOutcome {
    /// Stopped on the iteration cap rather than on the accuracy test.
    pub fn exhausted(&self) -> bool {
        !self.converged
    }
}

/// Accuracies `(delta1, delta2)` for the estimate `M_k`.
pub fn agm_accuracies(m_k: f64, epsilon: f64, radius: f64, dim: usize) -> (f64, f64) {
    (
        epsilon / (32.0 * m_k),
        epsilon / (64.0 * m_k * radius * (dim as f64).sqrt()),
    )
}

pub fn train_agm<O: FirstOrderOracle + ?Sized>(oracle: &O, cfg: &AgmConfig) -> Result<AgmOutcome> {
    let m = oracle.dim();
    if !(cfg.l0 > 0.0 && cfg.epsilon > 0.0) {
        return Err(Error::InvalidConfig("l0 and epsilon must be positive".into()));
    }
    if cfg.phi0.len() != m || cfg.ball.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: if cfg.phi0.len() != m { cfg.phi0.len() } else { cfg.ball.dim() },
        });
    }
    if !cfg.ball.contains(&cfg.phi0, 1e-12) {
        return Err(Error::InvalidConfig("starting point lies outside the ball".into()));
    }
    let eps = cfg.epsilon;
    let floor = cfg.l0 * 2f64.powi(-50);
    let mut l_k = cfg.l0;
    let mut phi = cfg.phi0.clone();
    let mut out = AgmOutcome {
        output: phi.clone(),
        best_index: 0,
        z: f64::INFINITY,
        converged: false,
        iterations: 0,
        total_checks: 0,
        accepted: Vec::new(),
        gx_norms: Vec::new(),
        iterates: Vec::new(),
        trace: TrainTrace::default(),
    };
    let mut matvecs = 0;

    for k in 0..cfg.max_outer_iters {
        let mut m_k = l_k;
        let mut checks = 0;
        let (omega, g_x, loss, d1, d2) = loop {
            if !m_k.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "line search diverged at step {k}; the objective is not smooth on the ball"
                )));
            }
            checks += 1;
            let (d1, d2) = agm_accuracies(m_k, eps, cfg.ball.radius(), m);
            let f = oracle.value(&phi, d1)?;
            let g = oracle.gradient(&phi, d2)?;
            let (omega, g_x) = prox_step(&phi, &g.vector, 1.0 / m_k, &cfg.ball);
            let f_omega = oracle.value(&omega, d1)?;
            matvecs += f.matvecs + g.matvecs + f_omega.matvecs;
            let diff: Vec<f64> = omega.iter().zip(&phi).map(|(a, b)| a - b).collect();
            let bound = f.value + dot(&g.vector, &diff) + 0.5 * m_k * dot(&diff, &diff) + eps / (8.0 * m_k);
            let accepted = f_omega.value <= bound;
            out.trace.trials.push(LineSearchTrial {
                iteration: k,
                m_k,
                delta1: d1,
                delta2: d2,
                loss: f.value,
                trial_loss: f_omega.value,
                bound,
                accepted,
            });
            if accepted {
                break (omega, g_x, f.value, d1, d2);
            }
            m_k *= 2.0;
        };
        let norm = norm2(&g_x);
        out.total_checks += checks;
        out.accepted.push(m_k);
        out.gx_norms.push(norm);
        out.iterations = k + 1;
        out.trace.push(TraceRecord {
            iteration: k,
            loss,
            delta1: d1,
            delta2: Some(d2),
            step: m_k,
            gx_norm: Some(norm),
            checks,
            matvecs,
        });
        out.iterates.push(std::mem::replace(&mut phi, omega));
        l_k = (m_k / 2.0).max(floor);
        if norm < out.z {
            out.z = norm;
            out.best_index = k;
            out.output = phi.clone();
        }
        if out.z <= eps {
            out.converged = true;
            break;
        }
    }
    Ok(out)
}
