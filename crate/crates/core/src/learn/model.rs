//! Hypotheses and the small classifiers trained by gradient descent on the
//! logistic loss.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::protocol::Example;
use crate::scalar::Scalar;

/// A binary classifier `h: x → {0, 1}`.
pub trait Hypothesis<T> {
    fn classify(&self, x: &[T]) -> u8;
}

/// `R(c, h)`: fraction of the test set `h` misclassifies.
pub fn evaluate_error<T, H: Hypothesis<T> + ?Sized>(
    hypothesis: &H,
    test_set: &[Example<T>],
) -> Result<f64> {
    if test_set.is_empty() {
        return Err(Error::EmptyInput("test set is empty".into()));
    }
    let wrong = test_set
        .iter()
        .filter(|e| hypothesis.classify(&e.x) != e.label)
        .count();
    Ok(wrong as f64 / test_set.len() as f64)
}

/// Predicts the same class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantHypothesis(pub u8);

impl<T> Hypothesis<T> for ConstantHypothesis {
    fn classify(&self, _x: &[T]) -> u8 {
        self.0
    }
}

/// Opposite prediction of the wrapped hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct Negated<H>(pub H);

impl<T, H: Hypothesis<T>> Hypothesis<T> for Negated<H> {
    fn classify(&self, x: &[T]) -> u8 {
        1 - self.0.classify(x)
    }
}

fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&u, &v)| acc + u * v)
}

/// Linear threshold unit `1[w·x + b > 0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
}

impl<T: Scalar> LinearModel<T> {
    pub fn zeros(dimension: usize) -> Self {
        Self {
            weights: vec![T::zero(); dimension],
            bias: T::zero(),
        }
    }

    pub fn from_parts(weights: Vec<T>, bias: T) -> Self {
        Self { weights, bias }
    }

    pub fn logit(&self, x: &[T]) -> T {
        dot(&self.weights, x) + self.bias
    }

    fn step(&mut self, batch: &[Example<T>], step_size: T) {
        let scale = step_size / T::count(batch.len() as u64);
        let mut grad_w = vec![T::zero(); self.weights.len()];
        let mut grad_b = T::zero();
        for e in batch {
            let residual = sigmoid(self.logit(&e.x)) - T::count(u64::from(e.label));
            for (g, &xi) in grad_w.iter_mut().zip(&e.x) {
                *g = *g + residual * xi;
            }
            grad_b = grad_b + residual;
        }
        for (w, g) in self.weights.iter_mut().zip(grad_w) {
            *w = *w - scale * g;
        }
        self.bias = self.bias - scale * grad_b;
    }
}

impl<T: Scalar> Hypothesis<T> for LinearModel<T> {
    fn classify(&self, x: &[T]) -> u8 {
        u8::from(self.logit(x) > T::zero())
    }
}

/// One hidden `tanh` layer followed by a logistic output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HiddenLayerNet<T> {
    /// Row-major `width × dimension`.
    pub hidden_weights: Vec<T>,
    pub hidden_bias: Vec<T>,
    pub output_weights: Vec<T>,
    pub output_bias: T,
    dimension: usize,
}

impl<T: Scalar> HiddenLayerNet<T> {
    /// Gaussian initialization with variance `1/fan_in` per layer.
    pub fn init<R: Rng + ?Sized>(dimension: usize, width: usize, rng: &mut R) -> Self {
        let mut normal = |fan_in: usize| {
            let v: f64 = rng.sample(StandardNormal);
            T::lit(v / (fan_in as f64).sqrt())
        };
        let hidden_weights = (0..width * dimension).map(|_| normal(dimension)).collect();
        let output_weights = (0..width).map(|_| normal(width)).collect();
        Self {
            hidden_weights,
            hidden_bias: vec![T::zero(); width],
            output_weights,
            output_bias: T::zero(),
            dimension,
        }
    }

    pub fn width(&self) -> usize {
        self.hidden_bias.len()
    }

    fn hidden(&self, x: &[T]) -> Vec<T> {
        self.hidden_weights
            .chunks(self.dimension)
            .zip(&self.hidden_bias)
            .map(|(row, &b)| (dot(row, x) + b).tanh())
            .collect()
    }

    pub fn logit(&self, x: &[T]) -> T {
        dot(&self.output_weights, &self.hidden(x)) + self.output_bias
    }

    fn step(&mut self, batch: &[Example<T>], step_size: T) {
        let width = self.width();
        let d = self.dimension;
        let scale = step_size / T::count(batch.len() as u64);
        let mut g_hw = vec![T::zero(); width * d];
        let mut g_hb = vec![T::zero(); width];
        let mut g_ow = vec![T::zero(); width];
        let mut g_ob = T::zero();
        for e in batch {
            let h = self.hidden(&e.x);
            let out = dot(&self.output_weights, &h) + self.output_bias;
            let residual = sigmoid(out) - T::count(u64::from(e.label));
            g_ob = g_ob + residual;
            for j in 0..width {
                g_ow[j] = g_ow[j] + residual * h[j];
                let back = residual * self.output_weights[j] * (T::one() - h[j] * h[j]);
                g_hb[j] = g_hb[j] + back;
                for (g, &xi) in g_hw[j * d..(j + 1) * d].iter_mut().zip(&e.x) {
                    *g = *g + back * xi;
                }
            }
        }
        for (w, g) in self.hidden_weights.iter_mut().zip(g_hw) {
            *w = *w - scale * g;
        }
        for (w, g) in self.hidden_bias.iter_mut().zip(g_hb) {
            *w = *w - scale * g;
        }
        for (w, g) in self.output_weights.iter_mut().zip(g_ow) {
            *w = *w - scale * g;
        }
        self.output_bias = self.output_bias - scale * g_ob;
    }
}

impl<T: Scalar> Hypothesis<T> for HiddenLayerNet<T> {
    fn classify(&self, x: &[T]) -> u8 {
        u8::from(self.logit(x) > T::zero())
    }
}

/// Architecture of the gradient-trained learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    LinearThreshold,
    HiddenLayer { width: usize },
}

/// A trainable classifier of either architecture.
#[derive(Debug, Clone, PartialEq)]
pub enum Model<T> {
    Linear(LinearModel<T>),
    Network(HiddenLayerNet<T>),
}

impl<T: Scalar> Model<T> {
    pub fn new<R: Rng + ?Sized>(kind: ModelKind, dimension: usize, rng: &mut R) -> Self {
        match kind {
            ModelKind::LinearThreshold => Model::Linear(LinearModel::zeros(dimension)),
            ModelKind::HiddenLayer { width } => {
                Model::Network(HiddenLayerNet::init(dimension, width, rng))
            }
        }
    }

    /// One gradient step on the mean logistic loss of `batch`.
    pub fn step(&mut self, batch: &[Example<T>], step_size: T) {
        if batch.is_empty() {
            return;
        }
        match self {
            Model::Linear(m) => m.step(batch, step_size),
            Model::Network(m) => m.step(batch, step_size),
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            Model::Linear(m) => m.weights.len() + 1,
            Model::Network(m) => m.hidden_weights.len() + 2 * m.width() + 1,
        }
    }
}

impl<T: Scalar> Hypothesis<T> for Model<T> {
    fn classify(&self, x: &[T]) -> u8 {
        match self {
            Model::Linear(m) => m.classify(x),
            Model::Network(m) => m.classify(x),
        }
    }
}

/// Discretization levels per parameter used for the `ln|H|` proxy.
pub const DEFAULT_DISCRETIZATION_LEVELS: u32 = 32;
/// Samples between two test-set evaluations.
pub const DEFAULT_EVALUATION_CADENCE: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig<T> {
    pub model: ModelKind,
    pub step_size: T,
    pub batch_size: usize,
    pub evaluation_cadence: usize,
    #[serde(default = "default_levels")]
    pub discretization_levels: u32,
}

fn default_levels() -> u32 {
    DEFAULT_DISCRETIZATION_LEVELS
}

impl<T: Scalar> LearnerConfig<T> {
    pub fn linear(step_size: T, batch_size: usize) -> Self {
        Self {
            model: ModelKind::LinearThreshold,
            step_size,
            batch_size,
            evaluation_cadence: DEFAULT_EVALUATION_CADENCE,
            discretization_levels: DEFAULT_DISCRETIZATION_LEVELS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > T::zero()) {
            return Err(domain(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        if self.batch_size == 0 || self.evaluation_cadence == 0 {
            return Err(domain("batch size and evaluation cadence must be positive"));
        }
        if !self.evaluation_cadence.is_multiple_of(self.batch_size) {
            return Err(domain(format!(
                "evaluation cadence {} must be a multiple of the batch size {}",
                self.evaluation_cadence, self.batch_size
            )));
        }
        if let ModelKind::HiddenLayer { width: 0 } = self.model {
            return Err(domain("hidden layer width must be positive"));
        }
        if self.discretization_levels < 2 {
            return Err(domain("at least two discretization levels are required"));
        }
        Ok(())
    }

    pub fn parameter_count(&self, dimension: usize) -> usize {
        match self.model {
            ModelKind::LinearThreshold => dimension + 1,
            ModelKind::HiddenLayer { width } => width * dimension + 2 * width + 1,
        }
    }

    /// `ln|H|` proxy: `parameter_count · ln(levels)`.
    pub fn log_hypothesis_count(&self, dimension: usize) -> f64 {
        self.parameter_count(dimension) as f64 * f64::from(self.discretization_levels).ln()
    }
}
