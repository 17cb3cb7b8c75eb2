//! Learning the parameters of feature-weighted PageRank models from pairwise
//! relevance judgments.
//!
//! Each query is a graph whose restart and transition probabilities are
//! normalized inner products of node and edge features with a parameter
//! vector `phi`. The stationary distribution ranks the nodes; training fits
//! `phi` so that more relevant nodes outrank less relevant ones by their
//! margins, under a squared hinge loss, over a Euclidean ball of parameters.
//!
//! - [`graph`]: query graphs, the parameter ball, restart and transition models
//! - [`stationary`]: truncated-series, power and dense stationary solvers
//! - [`derivative`]: Jacobians of the stationary distribution and the `beta1` bound
//! - [`oracle`]: the loss and its gradient, exact or with guaranteed accuracy
//! - [`optimize`]: gradient-free, adaptive gradient and fixed-step learners
//! - [`dataset`], [`experiment`]: files, synthetic data and experiment runs

pub mod dataset;
pub mod derivative;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod objectives;
pub mod optimize;
pub mod oracle;
pub mod stationary;

pub use dataset::{gen_synthetic, load_dataset, save_dataset, Dataset, SyntheticSpec};
pub use derivative::{beta1_bound, exact_derivative, nn_derivative, Beta1Bound, DerivativeMatrix};
pub use error::{Error, Result};
pub use graph::{
    node_weight, restart_distribution, transition_model, validate_feasibility, Ball, Edge, JudgmentPair, Params,
    QueryGraph, Split, TransitionModel,
};
pub use optimize::{train_agm, train_gbp, train_gfn, AgmConfig, GbpConfig, GfnConfig, TrainTrace};
pub use oracle::{grad_exact, grad_inexact, loss_exact, loss_inexact, GradEstimate, LossValue, RankingObjective};
pub use stationary::{exact_stationary, nn_stationary, power_stationary, MatvecCounter, RankingVector};
