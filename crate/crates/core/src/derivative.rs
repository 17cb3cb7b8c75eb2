//! Derivatives of the stationary distribution with respect to the parameters.
//!
//! Differentiating `pi = alpha pi0 + (1 - alpha) P^T pi` gives
//! `dpi/dphi = Pi0 + (1 - alpha) P^T dpi/dphi` with the seed matrix
//! `Pi0 = alpha dpi0/dphi + (1 - alpha) sum_i dp_i/dphi [pi]_i`, where `p_i` is
//! row `i` of `P`. [`nn_derivative`] runs the same renormalized series as the
//! stationary approximation on `Pi0`; [`exact_derivative`] solves the dense
//! system for reference.
//!
//! Dangling rows of `P` equal `pi0`, so their derivative is `dpi0/dphi`. Both
//! the seed matrix and the bound `beta1` include that contribution.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{dot, seed_weights, validate_feasibility, Ball, QueryGraph, TransitionModel};
use crate::stationary::{check_alpha, dense_system, exact_stationary_with_cap, nn_stationary, power_stationary, MatvecCounter, RankingVector, DENSE_CAP};

/// Dense row-major `p x m` matrix, one row per node and one column per
/// parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DerivativeMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] += v;
    }

    fn axpy(&mut self, a: f64, other: &DerivativeMatrix) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    fn scale(&mut self, a: f64) {
        self.data.iter_mut().for_each(|x| *x *= a);
    }

    /// Matrix 1-norm: largest absolute column sum.
    pub fn norm1(&self) -> f64 {
        self.column_abs_sums().into_iter().fold(0.0, f64::max)
    }

    fn column_abs_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.data.chunks_exact(self.cols.max(1)) {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x.abs();
            }
        }
        sums
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for row in self.data.chunks_exact(self.cols.max(1)) {
            for (s, x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// 1-norm of `self - other`.
    pub fn distance1(&self, other: &DerivativeMatrix) -> f64 {
        let mut d = self.clone();
        d.axpy(-1.0, other);
        d.norm1()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &DerivativeMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self^T v` for a node-indexed vector `v`.
    pub fn transpose_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (row, &vi) in self.data.chunks_exact(self.cols.max(1)).zip(v) {
            if vi == 0.0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += vi * x;
            }
        }
        out
    }

    fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            data.extend(m.row(r).iter());
        }
        Self::from_row_major(m.nrows(), m.ncols(), data)
    }
}

/// `d pi0 / d phi^T` by the quotient rule; the edge block is zero.
pub fn restart_jacobian(g: &QueryGraph, phi: &[f64]) -> Result<DerivativeMatrix> {
    let (w, total) = seed_weights(g, phi)?;
    let sum_v = g.seed_feature_sum();
    let mut jac = DerivativeMatrix::zeros(g.num_nodes(), g.dim());
    for (&s, wi) in g.seed().iter().zip(&w) {
        let v = &g.node_features()[s];
        for j in 0..g.m1() {
            jac.add_at(s, j, v[j] / total - wi * sum_v[j] / (total * total));
        }
    }
    Ok(jac)
}

/// Adds `coef * d p_i / d phi^T` for a non-dangling row `i` into `out`.
fn add_transition_row_jacobian(g: &QueryGraph, phi: &[f64], i: usize, coef: f64, out: &mut DerivativeMatrix) -> Result<()> {
    let m1 = g.m1();
    let phi2 = &phi[m1..];
    let sum_e = g
        .out_feature_sum(i)
        .ok_or_else(|| Error::DanglingNode { query: g.id().to_string(), node: i })?;
    let total = dot(phi2, &sum_e);
    if !(total > 0.0) {
        return Err(Error::NonPositiveDenominator {
            query: g.id().to_string(),
            location: format!("transition row {i}"),
            value: total,
        });
    }
    let t2 = total * total;
    for e in g.out_edges(i) {
        let w = dot(phi2, &e.features);
        for j in 0..g.m2() {
            out.add_at(e.to, m1 + j, coef * (e.features[j] / total - w * sum_e[j] / t2));
        }
    }
    Ok(())
}

/// `d p_i / d phi^T` for row `i` of `P`; nonzero only in the edge block and
/// on the rows of `i`'s successors. Fails for dangling nodes.
pub fn transition_jacobian_row(g: &QueryGraph, phi: &[f64], i: usize) -> Result<DerivativeMatrix> {
    if phi.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), actual: phi.len() });
    }
    let mut jac = DerivativeMatrix::zeros(g.num_nodes(), g.dim());
    add_transition_row_jacobian(g, phi, i, 1.0, &mut jac)?;
    Ok(jac)
}

/// Seed matrix `alpha dpi0/dphi + (1 - alpha) sum_i dp_i/dphi [pi]_i` at an
/// approximate stationary vector.
pub fn derivative_seed(g: &QueryGraph, phi: &[f64], alpha: f64, pi: &[f64]) -> Result<DerivativeMatrix> {
    check_alpha(alpha);
    let mut seed = restart_jacobian(g, phi)?;
    let dangling_mass: f64 = (0..g.num_nodes()).filter(|&i| g.is_dangling(i)).map(|i| pi[i]).sum();
    seed.scale(alpha + (1.0 - alpha) * dangling_mass);
    for i in 0..g.num_nodes() {
        if !g.is_dangling(i) && pi[i] != 0.0 {
            add_transition_row_jacobian(g, phi, i, (1.0 - alpha) * pi[i], &mut seed)?;
        }
    }
    Ok(seed)
}

/// Renormalized series `1/(1 - (1-alpha)^(N+1)) sum_{k=0}^N (1-alpha)^k (P^T)^k Pi0`.
///
/// Returns the approximation and the largest `||Pi_k||_1` seen along the
/// recursion. Each `P^T` product with the `p x m` iterate counts as `m`
/// mat-vecs.
pub fn nn_derivative_from_seed(
    tm: &TransitionModel,
    alpha: f64,
    seed: DerivativeMatrix,
    steps: usize,
    counter: &mut MatvecCounter,
) -> (DerivativeMatrix, f64) {
    check_alpha(alpha);
    let cols = seed.cols;
    let mut max_norm = seed.norm1();
    let mut acc = seed.clone();
    let mut current = seed;
    let mut next = DerivativeMatrix::zeros(current.rows, cols);
    let mut a = 1.0 - alpha;
    for _ in 0..steps {
        tm.apply_transpose_matrix(&current.data, cols, &mut next.data);
        std::mem::swap(&mut current, &mut next);
        max_norm = max_norm.max(current.norm1());
        acc.axpy(a, &current);
        a *= 1.0 - alpha;
    }
    counter.add((steps * cols) as u64);
    acc.scale(1.0 / (1.0 - a));
    (acc, max_norm)
}

/// Output of [`nn_derivative`].
#[derive(Clone, Debug)]
pub struct DerivativeRun {
    pub jacobian: DerivativeMatrix,
    /// The stationary approximation the seed matrix was built from.
    pub stationary: RankingVector,
    /// Largest 1-norm among the recursion iterates.
    pub max_iterate_norm: f64,
}

/// Approximates `dpi/dphi^T`: `stationary_steps` series terms for `pi`, then
/// `derivative_steps` terms of the derivative recursion seeded from it.
pub fn nn_derivative(
    tm: &TransitionModel,
    g: &QueryGraph,
    phi: &[f64],
    alpha: f64,
    stationary_steps: usize,
    derivative_steps: usize,
    counter: &mut MatvecCounter,
) -> Result<DerivativeRun> {
    let pi = nn_stationary(tm, alpha, stationary_steps, counter);
    let seed = derivative_seed(g, phi, alpha, &pi)?;
    let (jacobian, max_iterate_norm) = nn_derivative_from_seed(tm, alpha, seed, derivative_steps, counter);
    Ok(DerivativeRun {
        jacobian,
        stationary: pi,
        max_iterate_norm,
    })
}

/// Fixed-point iteration `X <- Pi0 + (1 - alpha) P^T X` started at `Pi0`,
/// with `pi` from `stationary_steps` power iterations. Plain truncation of the
/// derivative equation, without the renormalization of [`nn_derivative`].
pub fn power_derivative(
    tm: &TransitionModel,
    g: &QueryGraph,
    phi: &[f64],
    alpha: f64,
    stationary_steps: usize,
    derivative_steps: usize,
    counter: &mut MatvecCounter,
) -> Result<DerivativeRun> {
    let pi = power_stationary(tm, alpha, stationary_steps, counter);
    let seed = derivative_seed(g, phi, alpha, &pi)?;
    let cols = seed.cols;
    let mut max_norm = seed.norm1();
    let mut current = seed.clone();
    let mut next = DerivativeMatrix::zeros(seed.rows, cols);
    for _ in 0..derivative_steps {
        tm.apply_transpose_matrix(&current.data, cols, &mut next.data);
        next.scale(1.0 - alpha);
        next.axpy(1.0, &seed);
        std::mem::swap(&mut current, &mut next);
        max_norm = max_norm.max(current.norm1());
    }
    counter.add((derivative_steps * cols) as u64);
    Ok(DerivativeRun {
        jacobian: current,
        stationary: pi,
        max_iterate_norm: max_norm,
    })
}

/// Dense solve of `(I - (1 - alpha) P^T) X = Pi0(pi_exact)`.
pub fn exact_derivative(tm: &TransitionModel, g: &QueryGraph, phi: &[f64], alpha: f64) -> Result<DerivativeMatrix> {
    let a = dense_system(tm, alpha, g.id(), DENSE_CAP)?;
    let pi = exact_stationary_with_cap(tm, alpha, g.id(), DENSE_CAP)?;
    let seed = derivative_seed(g, phi, alpha, &pi)?;
    let x = a
        .lu()
        .solve(&seed.to_dmatrix())
        .ok_or_else(|| Error::Singular(g.id().to_string()))?;
    Ok(DerivativeMatrix::from_dmatrix(&x))
}

/// `||X - Pi0 - (1 - alpha) P^T X||_1`, the residual of the derivative equation.
pub fn derivative_residual(tm: &TransitionModel, alpha: f64, seed: &DerivativeMatrix, x: &DerivativeMatrix) -> f64 {
    let mut pt = DerivativeMatrix::zeros(x.rows, x.cols);
    tm.apply_transpose_matrix(&x.data, x.cols, &mut pt.data);
    let mut r = x.clone();
    r.axpy(-1.0, seed);
    r.axpy(-(1.0 - alpha), &pt);
    r.norm1()
}

/// `alpha ||dpi0/dphi||_1 + (1 - alpha) sum_i ||dp_i/dphi||_1` at one point,
/// the quantity `beta1` bounds over the whole ball.
pub fn seed_norm_sum(g: &QueryGraph, phi: &[f64], alpha: f64) -> Result<f64> {
    let restart = restart_jacobian(g, phi)?.norm1();
    let mut rows = 0.0;
    for i in 0..g.num_nodes() {
        rows += if g.is_dangling(i) {
            restart
        } else {
            transition_jacobian_row(g, phi, i)?.norm1()
        };
    }
    Ok(alpha * restart + (1.0 - alpha) * rows)
}

/// Uniform bound on the 1-norm of the derivative seed matrix over a ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Beta1Bound {
    /// Maximum over queries.
    pub value: f64,
    pub per_query: Vec<f64>,
}

/// `2 (<c, v> + R ||v||) / (<c, v> - R ||v||)^2 * max_j v_j`: bound on the
/// 1-norm of the Jacobian of `w / <phi, sum w>` over the ball.
fn normalized_weight_bound(center: &[f64], radius: f64, v: &[f64]) -> f64 {
    let cv = dot(center, v);
    let rn = radius * dot(v, v).sqrt();
    let vmax = v.iter().fold(0.0f64, |m, &x| m.max(x));
    2.0 * (cv + rn) / ((cv - rn) * (cv - rn)) * vmax
}

/// Per-query bound `beta1` for one graph; dangling rows contribute the
/// restart term.
pub fn beta1_for_query(g: &QueryGraph, ball: &Ball, alpha: f64) -> f64 {
    check_alpha(alpha);
    let (c1, c2) = ball.center().split_at(g.m1());
    let restart = normalized_weight_bound(c1, ball.radius(), &g.seed_feature_sum());
    let mut rows = 0.0;
    for i in 0..g.num_nodes() {
        rows += match g.out_feature_sum(i) {
            Some(sum) => normalized_weight_bound(c2, ball.radius(), &sum),
            None => restart,
        };
    }
    alpha * restart + (1.0 - alpha) * rows
}

/// Dataset-wide `beta1`: the maximum of the per-query bounds. Fails if the
/// ball does not pass [`validate_feasibility`].
pub fn beta1_bound(graphs: &[QueryGraph], ball: &Ball, alpha: f64) -> Result<Beta1Bound> {
    let report = validate_feasibility(graphs, ball);
    if !report.passed() {
        let reasons: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
        return Err(Error::InfeasibleBall(reasons.join("; ")));
    }
    let per_query: Vec<f64> = graphs.iter().map(|g| beta1_for_query(g, ball, alpha)).collect();
    let value = per_query.iter().copied().fold(0.0, f64::max);
    Ok(Beta1Bound { value, per_query })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Split};
    use crate::stationary::exact_stationary;

    const ALPHA: f64 = 0.15;

    fn fd_restart(g: &QueryGraph, phi: &[f64]) -> DerivativeMatrix {
        let h = 1e-6;
        let p = g.num_nodes();
        let mut out = DerivativeMatrix::zeros(p, phi.len());
        for c in 0..phi.len() {
            let mut up = phi.to_vec();
            let mut dn = phi.to_vec();
            up[c] += h;
            dn[c] -= h;
            let a = crate::graph::restart_distribution(g, &up).unwrap();
            let b = crate::graph::restart_distribution(g, &dn).unwrap();
            for r in 0..p {
                out.add_at(r, c, (a[r] - b[r]) / (2.0 * h));
            }
        }
        out
    }

    fn fd_row(g: &QueryGraph, phi: &[f64], i: usize) -> DerivativeMatrix {
        let h = 1e-6;
        let p = g.num_nodes();
        let mut out = DerivativeMatrix::zeros(p, phi.len());
        for c in 0..phi.len() {
            let mut up = phi.to_vec();
            let mut dn = phi.to_vec();
            up[c] += h;
            dn[c] -= h;
            let a = TransitionModel::new(g, &up).unwrap().dense_row(i);
            let b = TransitionModel::new(g, &dn).unwrap().dense_row(i);
            for r in 0..p {
                out.add_at(r, c, (a[r] - b[r]) / (2.0 * h));
            }
        }
        out
    }

    fn graph() -> QueryGraph {
        QueryGraph::new(
            "d",
            2,
            2,
            vec![vec![1.0, 0.0], vec![1.0, 2.0], vec![0.3, 0.9], vec![0.5, 0.1]],
            vec![0, 1],
            vec![
                Edge { from: 0, to: 1, features: vec![0.2, 0.9] },
                Edge { from: 0, to: 2, features: vec![0.7, 0.1] },
                Edge { from: 0, to: 3, features: vec![0.4, 0.4] },
                Edge { from: 1, to: 0, features: vec![1.0, 0.3] },
                Edge { from: 2, to: 2, features: vec![0.5, 0.6] },
                Edge { from: 2, to: 0, features: vec![0.1, 0.8] },
            ],
            vec![],
            Split::Train,
        )
        .unwrap()
    }

    #[test]
    fn restart_jacobian_matches_finite_differences() {
        let g = graph();
        let phi = [1.0, 1.0, 1.0, 1.0];
        let jac = restart_jacobian(&g, &phi).unwrap();
        assert!(jac.max_abs_diff(&fd_restart(&g, &phi)) < 1e-6);
        assert!(jac.column_sums().iter().all(|s| s.abs() < 1e-12));
        for r in 0..4 {
            assert_eq!(&jac.row(r)[2..], &[0.0, 0.0]);
        }
    }

    #[test]
    fn constant_distributions_have_zero_jacobian() {
        let single = QueryGraph::new("s", 1, 1, vec![vec![2.0], vec![1.0]], vec![0], vec![
            Edge { from: 0, to: 1, features: vec![1.0] },
        ], vec![], Split::Train)
        .unwrap();
        assert_eq!(restart_jacobian(&single, &[1.3, 0.7]).unwrap().max_abs(), 0.0);
        assert_eq!(transition_jacobian_row(&single, &[1.3, 0.7], 0).unwrap().max_abs(), 0.0);
        let mut c = MatvecCounter::new();
        let tm = TransitionModel::new(&single, &[1.3, 0.7]).unwrap();
        let run = nn_derivative(&tm, &single, &[1.3, 0.7], ALPHA, 5, 7, &mut c).unwrap();
        assert_eq!(run.jacobian.max_abs(), 0.0);
        assert_eq!(exact_derivative(&tm, &single, &[1.3, 0.7], ALPHA).unwrap().max_abs(), 0.0);

        let twin = QueryGraph::new("t", 2, 2, vec![vec![0.5, 0.2]; 3], vec![0, 1], vec![
            Edge { from: 0, to: 1, features: vec![0.3, 0.3] },
            Edge { from: 0, to: 2, features: vec![0.3, 0.3] },
        ], vec![], Split::Train)
        .unwrap();
        let phi = [0.4, 1.2, 0.8, 1.5];
        assert!(restart_jacobian(&twin, &phi).unwrap().max_abs() < 1e-16);
        assert!(transition_jacobian_row(&twin, &phi, 0).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn transition_row_matches_finite_differences() {
        let g = graph();
        let phi = [0.8, 1.1, 1.3, 0.6];
        for i in [0, 1, 2] {
            let jac = transition_jacobian_row(&g, &phi, i).unwrap();
            assert!(jac.max_abs_diff(&fd_row(&g, &phi, i)) < 1e-6);
            assert!(jac.column_sums().iter().all(|s| s.abs() < 1e-12));
            for r in 0..4 {
                assert_eq!(&jac.row(r)[..2], &[0.0, 0.0]);
                if !g.out_edges(i).any(|e| e.to == r) {
                    assert!(jac.row(r).iter().all(|&x| x == 0.0));
                }
            }
        }
        assert!(matches!(
            transition_jacobian_row(&g, &phi, 3),
            Err(Error::DanglingNode { node: 3, .. })
        ));
    }

    #[test]
    fn seed_matrix_conserves_mass() {
        let g = graph();
        let phi = [0.8, 1.1, 1.3, 0.6];
        let tm = TransitionModel::new(&g, &phi).unwrap();
        let pi = exact_stationary(&tm, ALPHA).unwrap();
        let seed = derivative_seed(&g, &phi, ALPHA, &pi).unwrap();
        assert!(seed.column_sums().iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn zero_derivative_steps_divides_seed_by_alpha() {
        let g = graph();
        let phi = [0.8, 1.1, 1.3, 0.6];
        let tm = TransitionModel::new(&g, &phi).unwrap();
        let mut c = MatvecCounter::new();
        let pi = nn_stationary(&tm, ALPHA, 10, &mut c);
        let seed = derivative_seed(&g, &phi, ALPHA, &pi).unwrap();
        let (out, _) = nn_derivative_from_seed(&tm, ALPHA, seed.clone(), 0, &mut c);
        for (a, b) in out.data().iter().zip(seed.data()) {
            assert!((a - b / ALPHA).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_derivative_solves_its_equation() {
        let g = graph();
        let phi = [0.8, 1.1, 1.3, 0.6];
        let tm = TransitionModel::new(&g, &phi).unwrap();
        let x = exact_derivative(&tm, &g, &phi, ALPHA).unwrap();
        let pi = exact_stationary(&tm, ALPHA).unwrap();
        let seed = derivative_seed(&g, &phi, ALPHA, &pi).unwrap();
        assert!(derivative_residual(&tm, ALPHA, &seed, &x) <= 1e-9);
    }

    #[test]
    fn swap_chain_hand_propagated() {
        // Two seeds with weights phi1[0] * 1 and phi1[0] * 0 + phi1[1] * 1, swap transitions.
        let g = QueryGraph::new("swap", 2, 1, vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0, 1], vec![
            Edge { from: 0, to: 1, features: vec![1.0] },
            Edge { from: 1, to: 0, features: vec![1.0] },
        ], vec![], Split::Train)
        .unwrap();
        let phi = [1.0, 3.0, 1.0];
        let tm = TransitionModel::new(&g, &phi).unwrap();
        let x = exact_derivative(&tm, &g, &phi, ALPHA).unwrap();
        // pi0 = (a, b)/(a + b); d pi0 / d a = (b, -b)/(a+b)^2 = (3/16, -3/16).
        // Only the restart depends on phi, so dpi = alpha (I - (1-alpha) S)^{-1} dpi0,
        // and S (swap) maps (u, -u) to (-u, u): (I - 0.85 S)^{-1} (u, -u) = (u, -u) / 1.85.
        let u = 3.0 / 16.0;
        let expect = ALPHA * u / 1.85;
        assert!((x.get(0, 0) - expect).abs() < 1e-9);
        assert!((x.get(1, 0) + expect).abs() < 1e-9);
        assert!(x.get(0, 2).abs() < 1e-12);
    }

    #[test]
    fn beta1_single_seed_example() {
        let g = QueryGraph::new("b", 1, 0, vec![vec![1.0]], vec![0], vec![], vec![], Split::Train).unwrap();
        let ball = Ball::new(vec![1.0], 0.5).unwrap();
        let restart_term = normalized_weight_bound(&[1.0], 0.5, &[1.0]);
        assert!((restart_term - 12.0).abs() < 1e-12);
        assert!((ALPHA * restart_term - 1.8).abs() < 1e-12);
        // the single node is dangling, so its row adds (1 - alpha) * 12
        let b = beta1_bound(std::slice::from_ref(&g), &ball, ALPHA).unwrap();
        assert!((b.value - (1.8 + 0.85 * 12.0)).abs() < 1e-12);
    }

    #[test]
    fn beta1_grows_with_radius() {
        let g = graph();
        let mut last = 0.0;
        for r in [0.1, 0.2, 0.4, 0.8] {
            let b = beta1_bound(std::slice::from_ref(&g), &Ball::around_ones(4, r).unwrap(), ALPHA)
                .unwrap()
                .value;
            assert!(b > last);
            last = b;
        }
        let infeasible = Ball::around_ones(4, 1.0).unwrap();
        assert!(matches!(
            beta1_bound(std::slice::from_ref(&g), &infeasible, ALPHA),
            Err(Error::InfeasibleBall(_))
        ));
    }
}
