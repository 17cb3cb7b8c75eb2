//! Dataset files and the synthetic instance generator.
//!
//! The on-disk format is JSON:
//!
//! ```json
//! {"m1": 2, "m2": 1, "alpha": 0.15,
//!  "queries": [{"id": "q0", "split": "train",
//!               "nodes": [{"features": [0.5, 1.0]}],
//!               "seed": [0],
//!               "edges": [{"from": 0, "to": 0, "features": [1.0]}],
//!               "judgments": [{"more": 0, "less": 1, "margin": 0.1}]}]}
//! ```

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Ball, Edge, JudgmentPair, QueryGraph, Split};

/// Damping factor used when none is given.
pub const DEFAULT_ALPHA: f64 = 0.15;
/// Radius of the default feasible ball around the all-ones vector.
pub const DEFAULT_RADIUS: f64 = 0.99;

/// A set of query graphs sharing feature dimensions and damping factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    m1: usize,
    m2: usize,
    alpha: f64,
    queries: Vec<QueryGraph>,
}

impl Dataset {
    pub fn new(m1: usize, m2: usize, alpha: f64, queries: Vec<QueryGraph>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        for q in &queries {
            if q.m1() != m1 || q.m2() != m2 {
                return Err(Error::InvalidGraph {
                    query: q.id().to_string(),
                    reason: format!(
                        "feature dimensions ({}, {}) differ from the dataset's ({m1}, {m2})",
                        q.m1(),
                        q.m2()
                    ),
                });
            }
        }
        Ok(Self {
            m1,
            m2,
            alpha,
            queries,
        })
    }

    pub fn m1(&self) -> usize {
        self.m1
    }
    pub fn m2(&self) -> usize {
        self.m2
    }
    /// Parameter dimension `m1 + m2`.
    pub fn dim(&self) -> usize {
        self.m1 + self.m2
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn queries(&self) -> &[QueryGraph] {
        &self.queries
    }
    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Queries with the given split tag, as a dataset of their own.
    pub fn split(&self, split: Split) -> Dataset {
        Dataset {
            queries: self.queries.iter().filter(|q| q.split() == split).cloned().collect(),
            ..self.clone()
        }
    }

    /// Largest number of judgments in a query.
    pub fn max_judgments(&self) -> usize {
        self.queries.iter().map(|q| q.judgments().len()).max().unwrap_or(0)
    }

    /// Largest node count.
    pub fn max_nodes(&self) -> usize {
        self.queries.iter().map(QueryGraph::num_nodes).max().unwrap_or(0)
    }

    /// The ball of radius 0.99 around the all-ones vector.
    pub fn default_ball(&self) -> Ball {
        Ball::around_ones(self.dim(), DEFAULT_RADIUS).expect("positive radius")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&DatasetFile::from(self))?)
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let file: DatasetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        file.into_dataset()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    m1: usize,
    m2: usize,
    #[serde(default = "default_alpha")]
    alpha: f64,
    queries: Vec<QueryFile>,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryFile {
    id: String,
    nodes: Vec<NodeFile>,
    seed: Vec<usize>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    judgments: Vec<JudgmentFile>,
    #[serde(default)]
    split: Split,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeFile {
    features: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JudgmentFile {
    more: usize,
    less: usize,
    margin: f64,
}

impl From<&Dataset> for DatasetFile {
    fn from(d: &Dataset) -> Self {
        DatasetFile {
            m1: d.m1,
            m2: d.m2,
            alpha: d.alpha,
            queries: d
                .queries
                .iter()
                .map(|q| QueryFile {
                    id: q.id().to_string(),
                    nodes: q
                        .node_features()
                        .iter()
                        .map(|f| NodeFile { features: f.clone() })
                        .collect(),
                    seed: q.seed().to_vec(),
                    edges: q.edges().to_vec(),
                    judgments: q
                        .judgments()
                        .iter()
                        .map(|j| JudgmentFile {
                            more: j.more_relevant,
                            less: j.less_relevant,
                            margin: j.margin,
                        })
                        .collect(),
                    split: q.split(),
                })
                .collect(),
        }
    }
}

impl DatasetFile {
    fn into_dataset(self) -> Result<Dataset> {
        let mut ids = HashSet::new();
        let mut queries = Vec::with_capacity(self.queries.len());
        for q in self.queries {
            if !ids.insert(q.id.clone()) {
                return Err(Error::InvalidGraph {
                    query: q.id,
                    reason: "query id is duplicated".into(),
                });
            }
            let judgments = q
                .judgments
                .into_iter()
                .map(|j| JudgmentPair {
                    more_relevant: j.more,
                    less_relevant: j.less,
                    margin: j.margin,
                })
                .collect();
            queries.push(QueryGraph::new(
                q.id,
                self.m1,
                self.m2,
                q.nodes.into_iter().map(|n| n.features).collect(),
                q.seed,
                q.edges,
                judgments,
                q.split,
            )?);
        }
        Dataset::new(self.m1, self.m2, self.alpha, queries)
    }
}

/// Reads and validates a dataset file.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Dataset::from_json(&text, path)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut json = dataset.to_json()?;
    json.push('\n');
    write_atomic(path, json.as_bytes())
}

/// Shape of a generated dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub num_queries: usize,
    /// Nodes per query.
    pub nodes: usize,
    /// Maximum out-degree.
    pub max_outdegree: usize,
    pub m1: usize,
    pub m2: usize,
    /// Judgments per query.
    pub judgments: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Fraction of queries tagged `test`.
    pub test_fraction: f64,
    /// Margins are drawn from `(0, margin_max]`. A pair only adds to the loss
    /// when the less relevant node outscores the other by more than its margin.
    pub margin_max: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            num_queries: 4,
            nodes: 20,
            max_outdegree: 3,
            m1: 3,
            m2: 3,
            judgments: 10,
            seed: 0,
            alpha: DEFAULT_ALPHA,
            test_fraction: 0.0,
            margin_max: 0.01,
        }
    }
}

/// Generates a random dataset.
///
/// Features are uniform on `(0, 1]`, so every ball inside the positive
/// orthant is feasible. Judgments are oriented by a hidden node relevance
/// `<w, V_i>`, with `w` drawn near the all-ones vector and shared by all
/// queries, so node-weight parameters close to `w` rank well.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    let p = spec.nodes;
    if p == 0 {
        return Err(Error::InvalidConfig("synthetic graphs need at least one node".into()));
    }
    if spec.m1 == 0 {
        return Err(Error::InvalidConfig("m1 must be at least 1".into()));
    }
    if spec.max_outdegree > 0 && spec.m2 == 0 {
        return Err(Error::InvalidConfig("edges need m2 >= 1".into()));
    }
    let max_pairs = p * (p - 1) / 2;
    if spec.judgments > max_pairs {
        return Err(Error::InvalidConfig(format!(
            "{} judgments requested but only {max_pairs} distinct node pairs exist",
            spec.judgments
        )));
    }
    if !(spec.margin_max > 0.0 && spec.margin_max < 1.0) {
        return Err(Error::InvalidConfig("margin_max must lie in (0, 1)".into()));
    }
    if !(0.0..=1.0).contains(&spec.test_fraction) {
        return Err(Error::InvalidConfig("test_fraction must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let planted = planted_params(&mut rng, spec.m1);
    let num_test = (spec.test_fraction * spec.num_queries as f64).round() as usize;
    let num_train = spec.num_queries - num_test;

    let mut queries = Vec::with_capacity(spec.num_queries);
    for q in 0..spec.num_queries {
        let features = |rng: &mut ChaCha8Rng, len: usize| -> Vec<f64> {
            (0..len).map(|_| 1.0 - rng.random::<f64>()).collect()
        };
        let nodes: Vec<Vec<f64>> = (0..p).map(|_| features(&mut rng, spec.m1)).collect();
        let seed_count = 1 + rng.random_range(0..(p / 2).max(1));
        let mut seed: Vec<usize> = sample(&mut rng, p, seed_count).into_vec();
        seed.sort_unstable();
        let mut edges = Vec::new();
        for from in 0..p {
            let degree = rng.random_range(0..=spec.max_outdegree.min(p - 1));
            let mut targets: Vec<usize> = sample(&mut rng, p - 1, degree)
                .into_iter()
                .map(|t| if t >= from { t + 1 } else { t })
                .collect();
            targets.sort_unstable();
            for to in targets {
                edges.push(Edge {
                    from,
                    to,
                    features: features(&mut rng, spec.m2),
                });
            }
        }
        let split = if q < num_train { Split::Train } else { Split::Test };
        let id = format!("q{q:04}");
        let unjudged = QueryGraph::new(id.clone(), spec.m1, spec.m2, nodes, seed, edges, vec![], split)?;

        let relevance: Vec<f64> = unjudged
            .node_features()
            .iter()
            .map(|v| v.iter().zip(&planted).map(|(a, b)| a * b).sum())
            .collect();
        let mut pairs = HashSet::new();
        let mut judgments = Vec::with_capacity(spec.judgments);
        while judgments.len() < spec.judgments {
            let a = rng.random_range(0..p);
            let b = rng.random_range(0..p);
            if a == b || !pairs.insert((a.min(b), a.max(b))) {
                continue;
            }
            let (more, less) = if relevance[a] >= relevance[b] { (a, b) } else { (b, a) };
            let margin = spec.margin_max * (1.0 - rng.random::<f64>());
            judgments.push(JudgmentPair {
                more_relevant: more,
                less_relevant: less,
                margin,
            });
        }
        queries.push(QueryGraph::new(
            id,
            spec.m1,
            spec.m2,
            unjudged.node_features().to_vec(),
            unjudged.seed().to_vec(),
            unjudged.edges().to_vec(),
            judgments,
            split,
        )?);
    }
    Dataset::new(spec.m1, spec.m2, spec.alpha, queries)
}

/// A point at distance `0.9 * 0.99` from the all-ones vector in a random direction.
fn planted_params(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let dir = crate::optimize::sample_unit_sphere(rng, m);
    dir.iter().map(|d| 1.0 + 0.9 * DEFAULT_RADIUS * d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_feasibility;

    #[test]
    fn minimal_file_loads() {
        let text = r#"{"m1": 1, "m2": 0, "alpha": 0.15,
            "queries": [{"id": "a", "nodes": [{"features": [1.0]}], "seed": [0],
                         "edges": [], "judgments": [], "split": "train"}]}"#;
        let d = Dataset::from_json(text, Path::new("mem")).unwrap();
        assert_eq!(d.queries().len(), 1);
        assert_eq!(d.queries()[0].num_nodes(), 1);
    }

    #[test]
    fn negative_feature_names_node() {
        let text = r#"{"m1": 1, "m2": 0,
            "queries": [{"id": "a", "nodes": [{"features": [1.0]}, {"features": [-0.5]}], "seed": [0]}]}"#;
        let err = Dataset::from_json(text, Path::new("mem")).unwrap_err();
        let msg = err.to_string();
        assert!(err.is_data_error());
        assert!(msg.contains("`a`") && msg.contains("node 1"), "{msg}");
    }

    #[test]
    fn duplicated_seed_rejected() {
        let text = r#"{"m1": 1, "m2": 0,
            "queries": [{"id": "a", "nodes": [{"features": [1.0]}, {"features": [0.5]}], "seed": [1, 1]}]}"#;
        let msg = Dataset::from_json(text, Path::new("mem")).unwrap_err().to_string();
        assert!(msg.contains("duplicated"), "{msg}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let msg = Dataset::from_json("{\"m1\": 1,\n \"m2\": }", Path::new("bad.json"))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("bad.json") && msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn generator_is_deterministic_and_feasible() {
        let spec = SyntheticSpec {
            seed: 11,
            ..Default::default()
        };
        let a = gen_synthetic(&spec).unwrap();
        let b = gen_synthetic(&spec).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(validate_feasibility(a.queries(), &a.default_ball()).passed());
        for q in a.queries() {
            assert_eq!(q.judgments().len(), spec.judgments);
            assert!(q.sparsity() <= spec.max_outdegree);
        }
    }

    #[test]
    fn generator_rejects_too_many_judgments() {
        let spec = SyntheticSpec {
            nodes: 4,
            judgments: 7,
            ..Default::default()
        };
        assert!(matches!(gen_synthetic(&spec), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn split_tags() {
        let spec = SyntheticSpec {
            num_queries: 10,
            test_fraction: 0.5,
            ..Default::default()
        };
        let d = gen_synthetic(&spec).unwrap();
        assert_eq!(d.split(Split::Train).queries().len(), 5);
        assert_eq!(d.split(Split::Test).queries().len(), 5);
    }
}
