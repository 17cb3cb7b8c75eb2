//! Per-query feature graphs and the maps from parameters to restart and
//! transition probabilities.
//!
//! A node `i` has weight `<phi1, V_i>` and an edge `i -> j` has weight
//! `<phi2, E_ij>`. The restart distribution normalizes node weights over the
//! seed set; each transition row normalizes the weights of a node's outgoing
//! edges. Nodes without outgoing edges restart with probability one, so their
//! row of `P` equals the restart distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Train/test membership of a query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    #[default]
    Train,
    Test,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub features: Vec<f64>,
}

/// `more_relevant` should be ranked above `less_relevant` by at least `margin`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JudgmentPair {
    pub more_relevant: usize,
    pub less_relevant: usize,
    pub margin: f64,
}

/// One query's graph: node and edge features, the seed set and the assessor
/// judgments. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryGraph {
    id: String,
    m1: usize,
    m2: usize,
    nodes: Vec<Vec<f64>>,
    seed: Vec<usize>,
    edges: Vec<Edge>,
    judgments: Vec<JudgmentPair>,
    split: Split,
    /// Edge indices grouped by source node, in input order.
    out_edges: Vec<Vec<usize>>,
}

impl QueryGraph {
    /// Builds a graph and checks every invariant, including that the seed
    /// features and each non-empty outgoing edge set carry positive mass.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        m1: usize,
        m2: usize,
        nodes: Vec<Vec<f64>>,
        seed: Vec<usize>,
        edges: Vec<Edge>,
        judgments: Vec<JudgmentPair>,
        split: Split,
    ) -> Result<Self> {
        let g = Self::new_structural(id, m1, m2, nodes, seed, edges, judgments, split)?;
        g.check_positive_mass()?;
        Ok(g)
    }

    /// Like [`QueryGraph::new`] but skips the positive-mass check, leaving it
    /// to [`validate_feasibility`] to report.
    #[allow(clippy::too_many_arguments)]
    pub fn new_structural(
        id: impl Into<String>,
        m1: usize,
        m2: usize,
        nodes: Vec<Vec<f64>>,
        seed: Vec<usize>,
        edges: Vec<Edge>,
        judgments: Vec<JudgmentPair>,
        split: Split,
    ) -> Result<Self> {
        let id = id.into();
        let bad = |reason: String| Error::InvalidGraph {
            query: id.clone(),
            reason,
        };
        let p = nodes.len();
        if p == 0 {
            return Err(bad("graph has no nodes".into()));
        }
        for (i, v) in nodes.iter().enumerate() {
            if v.len() != m1 {
                return Err(bad(format!(
                    "node {i}: feature vector has length {}, expected m1 = {m1}",
                    v.len()
                )));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(bad(format!("node {i}: feature {x} is not a non-negative real")));
            }
        }
        if seed.is_empty() {
            return Err(bad("seed set is empty".into()));
        }
        let mut seen = vec![false; p];
        for &s in &seed {
            if s >= p {
                return Err(bad(format!("seed index {s} out of range (p = {p})")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(bad(format!("seed index {s} is duplicated")));
            }
        }
        let mut out_edges = vec![Vec::new(); p];
        for (k, e) in edges.iter().enumerate() {
            if e.from >= p || e.to >= p {
                return Err(bad(format!(
                    "edge {k} ({} -> {}) references a node out of range (p = {p})",
                    e.from, e.to
                )));
            }
            if e.features.len() != m2 {
                return Err(bad(format!(
                    "edge {k} ({} -> {}): feature vector has length {}, expected m2 = {m2}",
                    e.from,
                    e.to,
                    e.features.len()
                )));
            }
            if let Some(x) = e.features.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(bad(format!(
                    "edge {k} ({} -> {}): feature {x} is not a non-negative real",
                    e.from, e.to
                )));
            }
            out_edges[e.from].push(k);
        }
        for (k, j) in judgments.iter().enumerate() {
            if j.more_relevant >= p || j.less_relevant >= p {
                return Err(bad(format!("judgment {k} references a node out of range")));
            }
            if j.more_relevant == j.less_relevant {
                return Err(bad(format!("judgment {k} compares node {} with itself", j.more_relevant)));
            }
            if !(j.margin > 0.0 && j.margin < 1.0) {
                return Err(bad(format!("judgment {k}: margin {} is outside (0, 1)", j.margin)));
            }
        }
        Ok(Self {
            id,
            m1,
            m2,
            nodes,
            seed,
            edges,
            judgments,
            split,
            out_edges,
        })
    }

    fn check_positive_mass(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidGraph {
            query: self.id.clone(),
            reason,
        };
        if !self.seed_feature_sum().iter().any(|&x| x > 0.0) {
            return Err(bad("seed node features sum to the zero vector".into()));
        }
        for i in 0..self.num_nodes() {
            if let Some(sum) = self.out_feature_sum(i) {
                if !sum.iter().any(|&x| x > 0.0) {
                    return Err(bad(format!("node {i}: outgoing edge features sum to the zero vector")));
                }
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn m1(&self) -> usize {
        self.m1
    }
    pub fn m2(&self) -> usize {
        self.m2
    }
    pub fn dim(&self) -> usize {
        self.m1 + self.m2
    }
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }
    pub fn node_features(&self) -> &[Vec<f64>] {
        &self.nodes
    }
    pub fn seed(&self) -> &[usize] {
        &self.seed
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn judgments(&self) -> &[JudgmentPair] {
        &self.judgments
    }
    pub fn split(&self) -> Split {
        self.split
    }

    /// Indices into [`QueryGraph::edges`] of the edges leaving `node`.
    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.out_edges[node].iter().map(|&k| &self.edges[k])
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_edges[node].len()
    }

    pub fn is_dangling(&self, node: usize) -> bool {
        self.out_edges[node].is_empty()
    }

    /// Maximum out-degree over the nodes.
    pub fn sparsity(&self) -> usize {
        self.out_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `sum_{i in U} V_i`.
    pub fn seed_feature_sum(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.m1];
        for &s in &self.seed {
            for (acc, x) in sum.iter_mut().zip(&self.nodes[s]) {
                *acc += x;
            }
        }
        sum
    }

    /// `sum_{j: i -> j} E_ij`, or `None` for a dangling node.
    pub fn out_feature_sum(&self, node: usize) -> Option<Vec<f64>> {
        if self.is_dangling(node) {
            return None;
        }
        let mut sum = vec![0.0; self.m2];
        for e in self.out_edges(node) {
            for (acc, x) in sum.iter_mut().zip(&e.features) {
                *acc += x;
            }
        }
        Some(sum)
    }
}

/// The parameter vector `phi = (phi1, phi2)` of length `m1 + m2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub Vec<f64>);

impl Params {
    pub fn ones(m: usize) -> Self {
        Params(vec![1.0; m])
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
    /// Splits into the node block and the edge block.
    pub fn split(&self, m1: usize) -> (&[f64], &[f64]) {
        self.0.split_at(m1)
    }
}

impl std::ops::Deref for Params {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Params {
    fn from(v: Vec<f64>) -> Self {
        Params(v)
    }
}

/// Euclidean ball `{x : ||x - center||_2 <= radius}`.
///
/// The ball itself may sit anywhere; whether it keeps every probability
/// well defined for a dataset is decided by [`validate_feasibility`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidConfig(format!("ball radius must be positive, got {radius}")));
        }
        if center.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("ball center has non-finite entries".into()));
        }
        Ok(Self { center, radius })
    }

    /// Ball of radius `radius` around the all-ones vector.
    pub fn around_ones(m: usize, radius: f64) -> Result<Self> {
        Self::new(vec![1.0; m], radius)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn distance_from_center(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance_from_center(x) <= self.radius + tol
    }

    /// `min_j center_j - radius`; positive iff the ball is in the open
    /// positive orthant.
    pub fn orthant_slack(&self) -> f64 {
        self.center.iter().fold(f64::INFINITY, |m, &c| m.min(c)) - self.radius
    }

    /// Euclidean projection onto the ball.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let dist = self.distance_from_center(x);
        if dist <= self.radius {
            return x.to_vec();
        }
        let scale = self.radius / dist;
        x.iter()
            .zip(&self.center)
            .map(|(xi, ci)| ci + scale * (xi - ci))
            .collect()
    }
}

/// `F(phi1, i) = <phi1, V_i>`.
pub fn node_weight(phi1: &[f64], v: &[f64]) -> Result<f64> {
    if phi1.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: phi1.len(),
            actual: v.len(),
        });
    }
    Ok(dot(phi1, v))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_dim(g: &QueryGraph, phi: &[f64]) -> Result<()> {
    if phi.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            actual: phi.len(),
        });
    }
    Ok(())
}

/// Seed weights `<phi1, V_i>` for `i` in the seed set and their sum.
pub(crate) fn seed_weights(g: &QueryGraph, phi: &[f64]) -> Result<(Vec<f64>, f64)> {
    check_dim(g, phi)?;
    let phi1 = &phi[..g.m1()];
    let w: Vec<f64> = g.seed().iter().map(|&s| dot(phi1, &g.node_features()[s])).collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NonPositiveDenominator {
            query: g.id().to_string(),
            location: "restart distribution".into(),
            value: total,
        });
    }
    Ok((w, total))
}

/// Restart distribution `pi0(phi)`: normalized seed weights, zero off the
/// seed set.
pub fn restart_distribution(g: &QueryGraph, phi: &[f64]) -> Result<Vec<f64>> {
    let (w, total) = seed_weights(g, phi)?;
    let mut pi0 = vec![0.0; g.num_nodes()];
    for (&s, wi) in g.seed().iter().zip(&w) {
        pi0[s] = wi / total;
    }
    Ok(pi0)
}

/// Row-stochastic transition matrix with the restart rows kept implicit.
///
/// Non-dangling rows are stored in compressed sparse row form. Dangling rows
/// are not materialized: they equal `pi0`, and [`TransitionModel::apply_transpose`]
/// adds their mass back analytically.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionModel {
    pi0: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    dangling: Vec<usize>,
}

impl TransitionModel {
    pub fn new(g: &QueryGraph, phi: &[f64]) -> Result<Self> {
        let pi0 = restart_distribution(g, phi)?;
        let phi2 = &phi[g.m1()..];
        let p = g.num_nodes();
        let mut row_ptr = Vec::with_capacity(p + 1);
        let mut cols = Vec::with_capacity(g.edges().len());
        let mut vals = Vec::with_capacity(g.edges().len());
        let mut dangling = Vec::new();
        row_ptr.push(0);
        for i in 0..p {
            if g.is_dangling(i) {
                dangling.push(i);
            } else {
                let start = vals.len();
                let mut total = 0.0;
                for e in g.out_edges(i) {
                    let w = dot(phi2, &e.features);
                    total += w;
                    cols.push(e.to);
                    vals.push(w);
                }
                if !(total > 0.0) {
                    return Err(Error::NonPositiveDenominator {
                        query: g.id().to_string(),
                        location: format!("transition row {i}"),
                        value: total,
                    });
                }
                for v in &mut vals[start..] {
                    *v /= total;
                }
            }
            row_ptr.push(vals.len());
        }
        Ok(Self {
            pi0,
            row_ptr,
            cols,
            vals,
            dangling,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.pi0.len()
    }

    pub fn restart(&self) -> &[f64] {
        &self.pi0
    }

    pub fn dangling_rows(&self) -> &[usize] {
        &self.dangling
    }

    pub fn is_dangling(&self, i: usize) -> bool {
        self.row_ptr[i] == self.row_ptr[i + 1]
    }

    /// Stored `(column, probability)` entries of a non-dangling row.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    /// Dense row `i` of `P`, dangling rows included.
    pub fn dense_row(&self, i: usize) -> Vec<f64> {
        if self.is_dangling(i) {
            return self.pi0.clone();
        }
        let mut row = vec![0.0; self.num_nodes()];
        for (j, v) in self.row_entries(i) {
            row[j] += v;
        }
        row
    }

    /// `out = P^T x`.
    pub fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let mut dangling_mass = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            if r.is_empty() {
                dangling_mass += xi;
                continue;
            }
            for (&j, &v) in self.cols[r.clone()].iter().zip(&self.vals[r]) {
                out[j] += v * xi;
            }
        }
        if dangling_mass != 0.0 {
            for (o, &r) in out.iter_mut().zip(&self.pi0) {
                *o += dangling_mass * r;
            }
        }
    }

    /// `out = P^T X` for a row-major `p x cols` matrix `X`.
    pub fn apply_transpose_matrix(&self, x: &[f64], cols: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let mut dangling_mass = vec![0.0; cols];
        for i in 0..self.num_nodes() {
            let xi = &x[i * cols..(i + 1) * cols];
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            if r.is_empty() {
                for (d, v) in dangling_mass.iter_mut().zip(xi) {
                    *d += v;
                }
                continue;
            }
            for (&j, &v) in self.cols[r.clone()].iter().zip(&self.vals[r]) {
                let oj = &mut out[j * cols..(j + 1) * cols];
                for (o, xv) in oj.iter_mut().zip(xi) {
                    *o += v * xv;
                }
            }
        }
        if dangling_mass.iter().any(|&d| d != 0.0) {
            for (j, &r) in self.pi0.iter().enumerate() {
                if r == 0.0 {
                    continue;
                }
                let oj = &mut out[j * cols..(j + 1) * cols];
                for (o, d) in oj.iter_mut().zip(&dangling_mass) {
                    *o += r * d;
                }
            }
        }
    }
}

/// Convenience wrapper for [`TransitionModel::new`].
pub fn transition_model(g: &QueryGraph, phi: &[f64]) -> Result<TransitionModel> {
    TransitionModel::new(g, phi)
}

/// A single reason why a ball does not keep all probabilities well defined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FeasibilityFailure {
    DimensionMismatch { query: String, expected: usize, actual: usize },
    /// `center_j - radius <= 0`.
    Orthant { coordinate: usize, slack: f64 },
    /// Minimum of the seed weight sum over the ball is not positive.
    SeedSum { query: String, min_value: f64 },
    /// Minimum of a node's outgoing edge weight sum over the ball is not positive.
    EdgeSum { query: String, node: usize, min_value: f64 },
}

impl std::fmt::Display for FeasibilityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DimensionMismatch { query, expected, actual } => {
                write!(f, "query `{query}`: parameter dimension {expected}, ball dimension {actual}")
            }
            Self::Orthant { coordinate, slack } => {
                write!(f, "ball leaves the positive orthant at coordinate {coordinate} (slack {slack})")
            }
            Self::SeedSum { query, min_value } => {
                write!(f, "query `{query}`: seed weight sum can reach {min_value} over the ball")
            }
            Self::EdgeSum { query, node, min_value } => write!(
                f,
                "query `{query}`, node {node}: outgoing edge weight sum can reach {min_value} over the ball"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub failures: Vec<FeasibilityFailure>,
    /// Largest `t` such that the ball of radius `radius + t` would still keep
    /// every checked quantity positive (negative when the check fails).
    pub radius_slack: f64,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `min_{||x - c|| <= R} <x, v> = <c, v> - R ||v||_2`.
fn ball_minimum(center: &[f64], radius: f64, v: &[f64]) -> (f64, f64) {
    let norm = dot(v, v).sqrt();
    let min = dot(center, v) - radius * norm;
    let slack = if norm > 0.0 { min / norm } else { f64::NEG_INFINITY };
    (min, slack)
}

/// Checks that every restart and transition denominator stays strictly
/// positive on the whole ball, and that the ball is inside the positive
/// orthant. Failures are collected, not raised.
pub fn validate_feasibility(graphs: &[QueryGraph], ball: &Ball) -> FeasibilityReport {
    let mut failures = Vec::new();
    let mut slack = f64::INFINITY;
    let orthant = ball.orthant_slack();
    for (j, &c) in ball.center().iter().enumerate() {
        if c - ball.radius() <= 0.0 {
            failures.push(FeasibilityFailure::Orthant {
                coordinate: j,
                slack: c - ball.radius(),
            });
        }
    }
    slack = slack.min(orthant);
    for g in graphs {
        if g.dim() != ball.dim() {
            failures.push(FeasibilityFailure::DimensionMismatch {
                query: g.id().to_string(),
                expected: g.dim(),
                actual: ball.dim(),
            });
            continue;
        }
        let (c1, c2) = ball.center().split_at(g.m1());
        let (min, s) = ball_minimum(c1, ball.radius(), &g.seed_feature_sum());
        slack = slack.min(s);
        if !(min > 0.0) {
            failures.push(FeasibilityFailure::SeedSum {
                query: g.id().to_string(),
                min_value: min,
            });
        }
        for i in 0..g.num_nodes() {
            if let Some(sum) = g.out_feature_sum(i) {
                let (min, s) = ball_minimum(c2, ball.radius(), &sum);
                slack = slack.min(s);
                if !(min > 0.0) {
                    failures.push(FeasibilityFailure::EdgeSum {
                        query: g.id().to_string(),
                        node: i,
                        min_value: min,
                    });
                }
            }
        }
    }
    FeasibilityReport {
        failures,
        radius_slack: slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(from: usize, to: usize, features: Vec<f64>) -> Edge {
        Edge { from, to, features }
    }

    fn two_seed_graph() -> QueryGraph {
        QueryGraph::new(
            "q",
            2,
            1,
            vec![vec![1.0, 0.0], vec![1.0, 2.0], vec![0.5, 0.5]],
            vec![0, 1],
            vec![edge(0, 1, vec![1.0]), edge(0, 2, vec![3.0]), edge(1, 2, vec![2.0])],
            vec![],
            Split::Train,
        )
        .unwrap()
    }

    #[test]
    fn node_weight_examples() {
        assert_eq!(node_weight(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(node_weight(&[1.0, 1.0], &[1.0, 2.0]).unwrap(), 3.0);
        assert_eq!(node_weight(&[2.0, 0.5], &[3.0, 4.0]).unwrap(), 8.0);
        assert!(matches!(
            node_weight(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn restart_examples() {
        let single = QueryGraph::new("s", 1, 0, vec![vec![2.0], vec![1.0]], vec![1], vec![], vec![], Split::Train)
            .unwrap();
        assert_eq!(restart_distribution(&single, &[0.7]).unwrap(), vec![0.0, 1.0]);

        let twin = QueryGraph::new(
            "t",
            2,
            0,
            vec![vec![0.3, 0.4], vec![0.3, 0.4]],
            vec![0, 1],
            vec![],
            vec![],
            Split::Train,
        )
        .unwrap();
        assert_eq!(restart_distribution(&twin, &[1.3, 0.2]).unwrap(), vec![0.5, 0.5]);

        let g = two_seed_graph();
        let pi0 = restart_distribution(&g, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(pi0, vec![0.25, 0.75, 0.0]);
    }

    #[test]
    fn transition_examples() {
        let g = two_seed_graph();
        let tm = TransitionModel::new(&g, &[1.0, 1.0, 1.0]).unwrap();
        // weights 1 and 3
        assert_eq!(tm.dense_row(0), vec![0.0, 0.25, 0.75]);
        // single outgoing edge
        assert_eq!(tm.dense_row(1), vec![0.0, 0.0, 1.0]);
        // dangling row is the restart distribution
        assert_eq!(tm.dangling_rows(), &[2]);
        assert_eq!(tm.dense_row(2), vec![0.25, 0.75, 0.0]);

        let sym = QueryGraph::new(
            "sym",
            1,
            2,
            vec![vec![1.0]; 3],
            vec![0],
            vec![edge(0, 1, vec![0.2, 0.5]), edge(0, 2, vec![0.2, 0.5])],
            vec![],
            Split::Train,
        )
        .unwrap();
        let tm = TransitionModel::new(&sym, &[1.0, 0.4, 2.0]).unwrap();
        assert_eq!(tm.dense_row(0), vec![0.0, 0.5, 0.5]);
    }

    #[test]
    fn apply_transpose_matches_dense() {
        let g = two_seed_graph();
        let tm = TransitionModel::new(&g, &[0.8, 1.3, 1.1]).unwrap();
        let x = [0.2, 0.3, 0.5];
        let mut out = [0.0; 3];
        tm.apply_transpose(&x, &mut out);
        for j in 0..3 {
            let expect: f64 = (0..3).map(|i| tm.dense_row(i)[j] * x[i]).sum();
            assert!((out[j] - expect).abs() < 1e-15);
        }
        let mut out_m = [0.0; 3];
        tm.apply_transpose_matrix(&x, 1, &mut out_m);
        assert_eq!(out, out_m);
    }

    #[test]
    fn feasibility_examples() {
        let g = QueryGraph::new("f", 2, 0, vec![vec![1.0, 1.0]], vec![0], vec![], vec![], Split::Train).unwrap();
        let ok = Ball::new(vec![1.0, 1.0], 0.99).unwrap();
        let rep = validate_feasibility(std::slice::from_ref(&g), &ok);
        assert!(rep.passed());
        // 2 - 0.99 * sqrt(2) over ||(1,1)|| = sqrt(2)
        let expected = (2.0 - 0.99 * 2f64.sqrt()) / 2f64.sqrt();
        assert!((2.0 - 0.99 * 2f64.sqrt() - 0.6000).abs() < 1e-3);
        assert!(rep.radius_slack <= expected + 1e-12);

        let big = Ball::new(vec![1.0, 1.0], 2f64.sqrt()).unwrap();
        let rep = validate_feasibility(std::slice::from_ref(&g), &big);
        assert!(!rep.passed());
        assert!(rep
            .failures
            .iter()
            .any(|f| matches!(f, FeasibilityFailure::SeedSum { .. })));

        let zero = QueryGraph::new_structural("z", 2, 0, vec![vec![0.0, 0.0]], vec![0], vec![], vec![], Split::Train)
            .unwrap();
        let rep = validate_feasibility(&[zero], &ok);
        assert!(matches!(rep.failures[0], FeasibilityFailure::SeedSum { ref query, .. } if query == "z"));
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        let dup = QueryGraph::new("d", 1, 0, vec![vec![1.0]; 2], vec![0, 0], vec![], vec![], Split::Train);
        assert!(matches!(dup, Err(Error::InvalidGraph { .. })));
        let neg = QueryGraph::new("n", 1, 0, vec![vec![-1.0]], vec![0], vec![], vec![], Split::Train);
        assert!(neg.unwrap_err().to_string().contains("node 0"));
        let zero = QueryGraph::new("z", 1, 0, vec![vec![0.0]], vec![0], vec![], vec![], Split::Train);
        assert!(zero.is_err());
        let self_judged = QueryGraph::new(
            "j",
            1,
            0,
            vec![vec![1.0]; 2],
            vec![0],
            vec![],
            vec![JudgmentPair {
                more_relevant: 1,
                less_relevant: 1,
                margin: 0.1,
            }],
            Split::Train,
        );
        assert!(self_judged.is_err());
    }

    #[test]
    fn projection_examples() {
        let unit = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(unit.project(&[0.3, -0.2]), vec![0.3, -0.2]);
        assert_eq!(unit.project(&[0.0, 0.0]), vec![0.0, 0.0]);
        let p = unit.project(&[3.0, 4.0]);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
    }
}
