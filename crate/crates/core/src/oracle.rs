//! The pairwise squared-hinge loss
//! `f(phi) = 1/|Q| sum_q ||(A_q pi_q(phi) + b_q)_+||^2`, its gradient, and
//! oracles returning both with a guaranteed accuracy.
//!
//! A judgment "node `u` is more relevant than node `v`, with margin `b`"
//! becomes a row of `A_q` with `+1` at `v`, `-1` at `u` and offset `-b`. Its
//! residual `(pi_v - pi_u - b)_+` is positive only when `v` outscores `u` by
//! more than `b`.
//!
//! Per-query terms run in parallel and are summed in query order, so results
//! do not depend on the thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::derivative::{beta1_bound, exact_derivative, nn_derivative, Beta1Bound, DerivativeMatrix};
use crate::error::{Error, Result};
use crate::graph::{validate_feasibility, Ball, FeasibilityReport, QueryGraph, TransitionModel};
use crate::stationary::{exact_stationary, nn_stationary, steps_for_log_ratio, MatvecCounter};

/// One row of `A_q`: `+1` at `plus`, `-1` at `minus`, offset `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JudgmentRow {
    pub plus: usize,
    pub minus: usize,
    pub offset: f64,
}

/// `(A_q, b_q)` in row form.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct JudgmentMatrix {
    pub rows: Vec<JudgmentRow>,
}

impl JudgmentMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(A pi + b)_+`.
    pub fn residuals(&self, pi: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| (pi[r.plus] - pi[r.minus] + r.offset).max(0.0))
            .collect()
    }

    /// `||(A pi + b)_+||_2^2`.
    pub fn squared_hinge(&self, pi: &[f64]) -> f64 {
        self.residuals(pi).iter().map(|x| x * x).sum()
    }

    /// `A^T u` as a vector over `p` nodes.
    pub fn apply_transpose(&self, u: &[f64], p: usize) -> Vec<f64> {
        let mut out = vec![0.0; p];
        for (r, &x) in self.rows.iter().zip(u) {
            out[r.plus] += x;
            out[r.minus] -= x;
        }
        out
    }
}

pub fn build_judgment_matrix(g: &QueryGraph) -> JudgmentMatrix {
    JudgmentMatrix {
        rows: g
            .judgments()
            .iter()
            .map(|j| JudgmentRow {
                plus: j.less_relevant,
                minus: j.more_relevant,
                offset: -j.margin,
            })
            .collect(),
    }
}

/// A loss value with its guaranteed absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LossValue {
    pub value: f64,
    /// Zero for exact evaluations.
    pub accuracy: f64,
    pub matvecs: u64,
}

/// A gradient with its guaranteed max-norm error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradEstimate {
    pub vector: Vec<f64>,
    pub accuracy: f64,
    /// Loss at the stationary approximation the gradient was built from.
    pub loss: f64,
    pub matvecs: u64,
}

/// Series length for a loss within `delta1`: `ceil(ln(8 r / delta1) / alpha) - 1`.
pub fn loss_steps(alpha: f64, r: usize, delta1: f64) -> usize {
    if r == 0 {
        return 0;
    }
    steps_for_log_ratio(alpha, 8.0 * r as f64 / delta1)
}

/// Series lengths `(N1, N2)` for a gradient within `delta2` in max-norm:
/// `ceil(ln(24 beta1 r / (alpha delta2)) / alpha) - 1` and
/// `ceil(ln(8 beta1 r / (alpha delta2)) / alpha) - 1`.
pub fn gradient_steps(alpha: f64, beta1: f64, r: usize, delta2: f64) -> (usize, usize) {
    if r == 0 {
        return (0, 0);
    }
    let base = beta1 * r as f64 / (alpha * delta2);
    (
        steps_for_log_ratio(alpha, 24.0 * base),
        steps_for_log_ratio(alpha, 8.0 * base),
    )
}

fn check_nonempty(dataset: &Dataset) -> Result<()> {
    if dataset.is_empty() {
        return Err(Error::InvalidConfig("dataset has no queries".into()));
    }
    Ok(())
}

fn check_accuracy(name: &str, delta: f64) -> Result<()> {
    if !(delta > 0.0) {
        return Err(Error::InvalidConfig(format!("{name} must be positive, got {delta}")));
    }
    Ok(())
}

/// Sums per-query results in query order.
fn reduce<T, F>(dataset: &Dataset, per_query: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&QueryGraph) -> Result<T> + Sync + Send,
{
    dataset.queries().par_iter().map(per_query).collect()
}

/// Loss given one stationary vector per query.
pub fn loss_from_vectors(dataset: &Dataset, pis: &[Vec<f64>]) -> f64 {
    let total: f64 = dataset
        .queries()
        .iter()
        .zip(pis)
        .map(|(g, pi)| build_judgment_matrix(g).squared_hinge(pi))
        .sum();
    total / dataset.queries().len() as f64
}

/// Loss with stationary vectors from the dense solve.
pub fn loss_exact(dataset: &Dataset, phi: &[f64]) -> Result<LossValue> {
    check_nonempty(dataset)?;
    let alpha = dataset.alpha();
    let terms = reduce(dataset, |g| {
        if g.judgments().is_empty() {
            return Ok(0.0);
        }
        let tm = TransitionModel::new(g, phi)?;
        let pi = exact_stationary_for(g, &tm, alpha)?;
        Ok(build_judgment_matrix(g).squared_hinge(&pi))
    })?;
    Ok(LossValue {
        value: terms.iter().sum::<f64>() / terms.len() as f64,
        accuracy: 0.0,
        matvecs: 0,
    })
}

fn exact_stationary_for(g: &QueryGraph, tm: &TransitionModel, alpha: f64) -> Result<Vec<f64>> {
    exact_stationary(tm, alpha)
        .map(|v| v.0)
        .map_err(|e| match e {
            Error::OverDenseCap { nodes, cap, .. } => Error::OverDenseCap {
                query: g.id().to_string(),
                nodes,
                cap,
            },
            Error::Singular(_) => Error::Singular(g.id().to_string()),
            e => e,
        })
}

/// Loss within `delta1` of the true value, using the series approximation
/// with [`loss_steps`] terms.
pub fn loss_inexact(dataset: &Dataset, phi: &[f64], delta1: f64) -> Result<LossValue> {
    check_nonempty(dataset)?;
    check_accuracy("delta1", delta1)?;
    let alpha = dataset.alpha();
    let steps = loss_steps(alpha, dataset.max_judgments(), delta1);
    let terms = reduce(dataset, |g| {
        if g.judgments().is_empty() {
            return Ok((0.0, 0));
        }
        let tm = TransitionModel::new(g, phi)?;
        let mut counter = MatvecCounter::new();
        let pi = nn_stationary(&tm, alpha, steps, &mut counter);
        Ok((build_judgment_matrix(g).squared_hinge(&pi), counter.get()))
    })?;
    Ok(LossValue {
        value: terms.iter().map(|t| t.0).sum::<f64>() / terms.len() as f64,
        accuracy: delta1,
        matvecs: terms.iter().map(|t| t.1).sum(),
    })
}

/// `2 J^T A^T (A pi + b)_+` for one query, and the squared hinge.
fn query_gradient(jm: &JudgmentMatrix, jacobian: &DerivativeMatrix, pi: &[f64]) -> (Vec<f64>, f64) {
    let res = jm.residuals(pi);
    let loss = res.iter().map(|x| x * x).sum();
    let mut u = jm.apply_transpose(&res, pi.len());
    u.iter_mut().for_each(|x| *x *= 2.0);
    (jacobian.transpose_mul(&u), loss)
}

fn combine(dataset: &Dataset, terms: Vec<(Vec<f64>, f64, u64)>, accuracy: f64) -> GradEstimate {
    let n = terms.len() as f64;
    let mut vector = vec![0.0; dataset.dim()];
    let mut loss = 0.0;
    let mut matvecs = 0;
    for (g, l, mv) in terms {
        for (v, x) in vector.iter_mut().zip(g) {
            *v += x;
        }
        loss += l;
        matvecs += mv;
    }
    vector.iter_mut().for_each(|v| *v /= n);
    GradEstimate {
        vector,
        accuracy,
        loss: loss / n,
        matvecs,
    }
}

/// Gradient with the dense-solve stationary vector and Jacobian.
pub fn grad_exact(dataset: &Dataset, phi: &[f64]) -> Result<GradEstimate> {
    check_nonempty(dataset)?;
    let alpha = dataset.alpha();
    let m = dataset.dim();
    let terms = reduce(dataset, |g| {
        let jm = build_judgment_matrix(g);
        if jm.is_empty() {
            return Ok((vec![0.0; m], 0.0, 0));
        }
        let tm = TransitionModel::new(g, phi)?;
        let pi = exact_stationary_for(g, &tm, alpha)?;
        let jac = exact_derivative(&tm, g, phi, alpha)?;
        let (grad, loss) = query_gradient(&jm, &jac, &pi);
        Ok((grad, loss, 0))
    })?;
    Ok(combine(dataset, terms, 0.0))
}

/// Gradient within `delta2` in max-norm, given the dataset's `beta1`.
pub fn grad_inexact(dataset: &Dataset, phi: &[f64], delta2: f64, beta1: f64) -> Result<GradEstimate> {
    check_nonempty(dataset)?;
    check_accuracy("delta2", delta2)?;
    let alpha = dataset.alpha();
    let m = dataset.dim();
    let (n1, n2) = gradient_steps(alpha, beta1, dataset.max_judgments(), delta2);
    let terms = reduce(dataset, |g| {
        let jm = build_judgment_matrix(g);
        if jm.is_empty() {
            return Ok((vec![0.0; m], 0.0, 0));
        }
        let tm = TransitionModel::new(g, phi)?;
        let mut counter = MatvecCounter::new();
        let run = nn_derivative(&tm, g, phi, alpha, n1, n2, &mut counter)?;
        let (grad, loss) = query_gradient(&jm, &run.jacobian, &run.stationary);
        Ok((grad, loss, counter.get()))
    })?;
    Ok(combine(dataset, terms, delta2))
}

/// The ranking loss over a validated ball, with `beta1` computed once.
#[derive(Clone, Debug)]
pub struct RankingObjective<'a> {
    dataset: &'a Dataset,
    ball: Ball,
    beta1: Beta1Bound,
    feasibility: FeasibilityReport,
}

impl<'a> RankingObjective<'a> {
    /// Fails with [`Error::InfeasibleBall`] if some probability denominator
    /// can vanish on the ball.
    pub fn new(dataset: &'a Dataset, ball: Ball) -> Result<Self> {
        check_nonempty(dataset)?;
        if ball.dim() != dataset.dim() {
            return Err(Error::DimensionMismatch {
                expected: dataset.dim(),
                actual: ball.dim(),
            });
        }
        let feasibility = validate_feasibility(dataset.queries(), &ball);
        let beta1 = beta1_bound(dataset.queries(), &ball, dataset.alpha())?;
        Ok(Self {
            dataset,
            ball,
            beta1,
            feasibility,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        self.dataset
    }
    pub fn ball(&self) -> &Ball {
        &self.ball
    }
    pub fn beta1(&self) -> &Beta1Bound {
        &self.beta1
    }
    /// How far beyond the ball the probabilities stay well defined.
    pub fn radius_slack(&self) -> f64 {
        self.feasibility.radius_slack
    }

    /// Loss within `delta1`; `delta1 == 0` asks for the dense solve.
    pub fn loss(&self, phi: &[f64], delta1: f64) -> Result<LossValue> {
        if delta1 == 0.0 {
            loss_exact(self.dataset, phi)
        } else {
            loss_inexact(self.dataset, phi, delta1)
        }
    }

    /// Gradient within `delta2`; `delta2 == 0` asks for the dense solve.
    pub fn gradient(&self, phi: &[f64], delta2: f64) -> Result<GradEstimate> {
        if delta2 == 0.0 {
            grad_exact(self.dataset, phi)
        } else {
            grad_inexact(self.dataset, phi, delta2, self.beta1.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_synthetic, SyntheticSpec};
    use crate::graph::{Edge, JudgmentPair, Split};

    fn swap_dataset(margin: f64) -> Dataset {
        let g = QueryGraph::new(
            "swap",
            1,
            1,
            vec![vec![1.0], vec![1.0]],
            vec![0],
            vec![
                Edge { from: 0, to: 1, features: vec![1.0] },
                Edge { from: 1, to: 0, features: vec![1.0] },
            ],
            vec![JudgmentPair {
                more_relevant: 1,
                less_relevant: 0,
                margin,
            }],
            Split::Train,
        )
        .unwrap();
        Dataset::new(1, 1, 0.15, vec![g]).unwrap()
    }

    #[test]
    fn judgment_rows() {
        let d = swap_dataset(0.2);
        let jm = build_judgment_matrix(&d.queries()[0]);
        assert_eq!(
            jm.rows,
            vec![JudgmentRow {
                plus: 0,
                minus: 1,
                offset: -0.2
            }]
        );
    }

    #[test]
    fn swap_losses() {
        let phi = [1.0, 1.0];
        assert_eq!(loss_exact(&swap_dataset(0.2), &phi).unwrap().value, 0.0);
        let l = loss_exact(&swap_dataset(0.05), &phi).unwrap().value;
        let gap: f64 = 0.15 / 0.2775 - (1.0 - 0.15 / 0.2775) - 0.05;
        assert!((l - gap * gap).abs() < 1e-15);
        assert!((l - 9.661e-4).abs() < 1e-7);
    }

    #[test]
    fn duplicated_judgment_doubles() {
        let d = swap_dataset(0.05);
        let g = &d.queries()[0];
        let j = g.judgments()[0];
        let g2 = QueryGraph::new(
            "dup",
            1,
            1,
            g.node_features().to_vec(),
            g.seed().to_vec(),
            g.edges().to_vec(),
            vec![j, j],
            Split::Train,
        )
        .unwrap();
        let d2 = Dataset::new(1, 1, 0.15, vec![g2]).unwrap();
        let a = loss_exact(&d, &[1.0, 1.0]).unwrap().value;
        let b = loss_exact(&d2, &[1.0, 1.0]).unwrap().value;
        assert!((b - 2.0 * a).abs() < 1e-16);
    }

    #[test]
    fn step_formulas() {
        assert_eq!(loss_steps(0.15, 10, 1e-3), 75);
        assert_eq!(loss_steps(0.15, 0, 1e-3), 0);
        assert_eq!(gradient_steps(0.15, 2.0, 10, 1e-2), (84, 77));
    }

    #[test]
    fn no_judgments_give_zero() {
        let spec = SyntheticSpec {
            judgments: 0,
            ..Default::default()
        };
        let d = gen_synthetic(&spec).unwrap();
        let phi = vec![1.0; d.dim()];
        assert_eq!(loss_inexact(&d, &phi, 1e-3).unwrap().value, 0.0);
        let g = grad_inexact(&d, &phi, 1e-3, 1.0).unwrap();
        assert!(g.vector.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn inexact_within_accuracy() {
        let d = gen_synthetic(&SyntheticSpec {
            seed: 3,
            ..Default::default()
        })
        .unwrap();
        let obj = RankingObjective::new(&d, d.default_ball()).unwrap();
        let phi = vec![1.2; d.dim()];
        let exact = obj.loss(&phi, 0.0).unwrap().value;
        let ge = obj.gradient(&phi, 0.0).unwrap();
        for delta in [1e-2, 1e-4, 1e-6] {
            assert!((obj.loss(&phi, delta).unwrap().value - exact).abs() <= delta);
            let gi = obj.gradient(&phi, delta).unwrap();
            let err = gi.vector.iter().zip(&ge.vector).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err <= delta, "{err} > {delta}");
        }
    }

    #[test]
    fn loss_is_scale_invariant() {
        let d = gen_synthetic(&SyntheticSpec {
            seed: 5,
            ..Default::default()
        })
        .unwrap();
        let phi: Vec<f64> = (0..d.dim()).map(|i| 0.5 + 0.1 * i as f64).collect();
        let a = loss_exact(&d, &phi).unwrap().value;
        for lambda in [0.1, 3.0, 1e3] {
            let scaled: Vec<f64> = phi.iter().map(|x| lambda * x).collect();
            assert!((loss_exact(&d, &scaled).unwrap().value - a).abs() <= 1e-10);
        }
    }

    #[test]
    fn infeasible_ball_rejected() {
        let d = swap_dataset(0.1);
        let ball = Ball::around_ones(2, 1.5).unwrap();
        assert!(matches!(RankingObjective::new(&d, ball), Err(Error::InfeasibleBall(_))));
    }
}
