//! Closed-form objectives for exercising the learners, and a wrapper that
//! perturbs any objective by a deterministic error of bounded size.

use std::hash::{DefaultHasher, Hash, Hasher};

use crate::error::Result;
use crate::optimize::{FirstOrderOracle, ZeroOrderOracle};
use crate::oracle::{GradEstimate, LossValue};

/// `f(x) = L/2 ||x - c||^2`: convex, `L`-smooth, minimum 0 at `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic {
    pub center: Vec<f64>,
    pub lipschitz: f64,
}

impl Quadratic {
    pub fn new(center: Vec<f64>, lipschitz: f64) -> Self {
        Self { center, lipschitz }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        0.5 * self.lipschitz * x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>()
    }
}

impl ZeroOrderOracle for Quadratic {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn value(&self, x: &[f64], _delta: f64) -> Result<LossValue> {
        Ok(exact_value(self.eval(x)))
    }
}

impl FirstOrderOracle for Quadratic {
    fn gradient(&self, x: &[f64], _delta: f64) -> Result<GradEstimate> {
        let vector = x.iter().zip(&self.center).map(|(a, c)| self.lipschitz * (a - c)).collect();
        Ok(GradEstimate {
            vector,
            accuracy: 0.0,
            loss: self.eval(x),
            matvecs: 0,
        })
    }
}

/// `f(x) = sum_j a_j (1 - cos(w (x_j - c_j)))`: nonconvex, smooth with
/// constant `w^2 max_j a_j`, bounded below by 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineRidge {
    pub weights: Vec<f64>,
    pub frequency: f64,
    pub center: Vec<f64>,
}

impl CosineRidge {
    pub fn new(weights: Vec<f64>, frequency: f64, center: Vec<f64>) -> Self {
        assert_eq!(weights.len(), center.len());
        Self {
            weights,
            frequency,
            center,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        self.frequency * self.frequency * self.weights.iter().fold(0.0f64, |m, &a| m.max(a))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let w = self.frequency;
        x.iter()
            .zip(&self.center)
            .zip(&self.weights)
            .map(|((xi, c), a)| a * (1.0 - (w * (xi - c)).cos()))
            .sum()
    }
}

impl ZeroOrderOracle for CosineRidge {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn value(&self, x: &[f64], _delta: f64) -> Result<LossValue> {
        Ok(exact_value(self.eval(x)))
    }
}

impl FirstOrderOracle for CosineRidge {
    fn gradient(&self, x: &[f64], _delta: f64) -> Result<GradEstimate> {
        let w = self.frequency;
        let vector = x
            .iter()
            .zip(&self.center)
            .zip(&self.weights)
            .map(|((xi, c), a)| a * w * (w * (xi - c)).sin())
            .collect();
        Ok(GradEstimate {
            vector,
            accuracy: 0.0,
            loss: self.eval(x),
            matvecs: 0,
        })
    }
}

fn exact_value(value: f64) -> LossValue {
    LossValue {
        value,
        accuracy: 0.0,
        matvecs: 0,
    }
}

/// Adds an error of at most `delta` to values and at most `delta` per
/// coordinate to gradients. The error is a fixed function of the point, the
/// requested accuracy and `seed`, so repeated calls agree.
#[derive(Clone, Debug, PartialEq)]
pub struct Noisy<O> {
    pub inner: O,
    pub seed: u64,
}

impl<O> Noisy<O> {
    pub fn new(inner: O, seed: u64) -> Self {
        Self { inner, seed }
    }

    /// Value in `[-1, 1]` determined by the point, accuracy, salt and seed.
    fn unit_noise(&self, x: &[f64], delta: f64, salt: u64) -> f64 {
        let mut h = DefaultHasher::new();
        self.seed.hash(&mut h);
        salt.hash(&mut h);
        delta.to_bits().hash(&mut h);
        for v in x {
            v.to_bits().hash(&mut h);
        }
        let bits = h.finish() >> 11;
        2.0 * (bits as f64 / (1u64 << 53) as f64) - 1.0
    }
}

impl<O: ZeroOrderOracle> ZeroOrderOracle for Noisy<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[f64], delta: f64) -> Result<LossValue> {
        let mut v = self.inner.value(x, delta)?;
        v.value += delta * self.unit_noise(x, delta, u64::MAX);
        v.accuracy = delta;
        Ok(v)
    }
    fn evaluation_slack(&self) -> f64 {
        self.inner.evaluation_slack()
    }
}

impl<O: FirstOrderOracle> FirstOrderOracle for Noisy<O> {
    fn gradient(&self, x: &[f64], delta: f64) -> Result<GradEstimate> {
        let mut g = self.inner.gradient(x, delta)?;
        for (j, v) in g.vector.iter_mut().enumerate() {
            *v += delta * self.unit_noise(x, delta, j as u64);
        }
        g.accuracy = delta;
        Ok(g)
    }
}
