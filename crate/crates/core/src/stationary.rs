//! Stationary distributions of the restart walk
//! `pi = alpha * pi0 + (1 - alpha) * P^T pi`.
//!
//! [`nn_stationary`] is the renormalized truncated Neumann series with a
//! guaranteed 1-norm error of `2 (1 - alpha)^(N + 1)`. [`power_stationary`] is
//! the plain fixed-point iteration and [`exact_stationary`] a dense LU solve
//! used as a reference on small graphs.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TransitionModel;

/// Largest graph handed to the dense solvers.
pub const DENSE_CAP: usize = 500;

/// A probability vector over one query's nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RankingVector(pub Vec<f64>);

impl RankingVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Node indices ordered by decreasing score; ties keep index order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.0.len()).collect();
        idx.sort_by(|&a, &b| self.0[b].total_cmp(&self.0[a]).then(a.cmp(&b)));
        idx
    }
}

impl std::ops::Deref for RankingVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Number of `P^T`-times-vector products performed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MatvecCounter(u64);

impl MatvecCounter {
    pub fn new() -> Self {
        Self(0)
    }
    pub fn add(&mut self, n: u64) {
        self.0 += n;
    }
    pub fn get(&self) -> u64 {
        self.0
    }
}

pub(crate) fn check_alpha(alpha: f64) {
    assert!(alpha > 0.0 && alpha < 1.0, "damping factor must lie in (0, 1), got {alpha}");
}

/// Renormalized truncated series
/// `alpha / (1 - (1-alpha)^(N+1)) * sum_{k=0}^N (1-alpha)^k (P^T)^k pi0`.
pub fn nn_stationary(tm: &TransitionModel, alpha: f64, steps: usize, counter: &mut MatvecCounter) -> RankingVector {
    check_alpha(alpha);
    if steps == 0 {
        return RankingVector(tm.restart().to_vec());
    }
    let p = tm.num_nodes();
    let mut current = tm.restart().to_vec();
    let mut next = vec![0.0; p];
    let mut acc = current.clone();
    let mut a = 1.0 - alpha;
    for _ in 0..steps {
        tm.apply_transpose(&current, &mut next);
        std::mem::swap(&mut current, &mut next);
        for (s, x) in acc.iter_mut().zip(&current) {
            *s += a * x;
        }
        a *= 1.0 - alpha;
    }
    counter.add(steps as u64);
    // a == (1 - alpha)^(steps + 1)
    let scale = alpha / (1.0 - a);
    acc.iter_mut().for_each(|x| *x *= scale);
    RankingVector(acc)
}

/// `steps` iterations of `pi <- alpha * pi0 + (1 - alpha) P^T pi` from `pi0`.
pub fn power_stationary(
    tm: &TransitionModel,
    alpha: f64,
    steps: usize,
    counter: &mut MatvecCounter,
) -> RankingVector {
    check_alpha(alpha);
    let pi0 = tm.restart();
    let mut current = pi0.to_vec();
    let mut next = vec![0.0; pi0.len()];
    for _ in 0..steps {
        tm.apply_transpose(&current, &mut next);
        for (n, r) in next.iter_mut().zip(pi0) {
            *n = alpha * r + (1.0 - alpha) * *n;
        }
        std::mem::swap(&mut current, &mut next);
    }
    counter.add(steps as u64);
    RankingVector(current)
}

/// Dense `I - (1 - alpha) P^T`.
pub(crate) fn dense_system(tm: &TransitionModel, alpha: f64, query: &str, cap: usize) -> Result<DMatrix<f64>> {
    let p = tm.num_nodes();
    if p > cap {
        return Err(Error::OverDenseCap {
            query: query.to_string(),
            nodes: p,
            cap,
        });
    }
    let mut a = DMatrix::<f64>::identity(p, p);
    for i in 0..p {
        // column i of P^T is row i of P
        for (j, v) in tm.dense_row(i).into_iter().enumerate() {
            a[(j, i)] -= (1.0 - alpha) * v;
        }
    }
    Ok(a)
}

/// Solves `(I - (1 - alpha) P^T) pi = alpha pi0` with LU, for graphs of at
/// most [`DENSE_CAP`] nodes.
pub fn exact_stationary(tm: &TransitionModel, alpha: f64) -> Result<RankingVector> {
    exact_stationary_with_cap(tm, alpha, "", DENSE_CAP)
}

pub fn exact_stationary_with_cap(tm: &TransitionModel, alpha: f64, query: &str, cap: usize) -> Result<RankingVector> {
    check_alpha(alpha);
    let a = dense_system(tm, alpha, query, cap)?;
    let rhs = DVector::from_iterator(tm.num_nodes(), tm.restart().iter().map(|x| alpha * x));
    let pi = a.lu().solve(&rhs).ok_or_else(|| Error::Singular(query.to_string()))?;
    Ok(RankingVector(pi.iter().copied().collect()))
}

/// `max(0, ceil(ln(2 / delta1) / alpha) - 1)`: enough series terms for a
/// 1-norm error of at most `delta1`.
pub fn steps_for_stationary_accuracy(alpha: f64, delta1: f64) -> usize {
    assert!(delta1 > 0.0, "accuracy must be positive");
    steps_for_log_ratio(alpha, 2.0 / delta1)
}

/// `max(0, ceil(ln(ratio) / alpha) - 1)`.
pub(crate) fn steps_for_log_ratio(alpha: f64, ratio: f64) -> usize {
    check_alpha(alpha);
    let n = (ratio.ln() / alpha).ceil() - 1.0;
    if n.is_finite() && n > 0.0 {
        n as usize
    } else {
        0
    }
}

/// `||pi - alpha pi0 - (1 - alpha) P^T pi||_1`.
pub fn stationary_residual(tm: &TransitionModel, alpha: f64, pi: &[f64]) -> f64 {
    let mut pt = vec![0.0; pi.len()];
    tm.apply_transpose(pi, &mut pt);
    pi.iter()
        .zip(tm.restart())
        .zip(&pt)
        .map(|((x, r), y)| (x - alpha * r - (1.0 - alpha) * y).abs())
        .sum()
}
