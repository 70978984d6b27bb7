//! One-hidden-layer perceptron trained by full-batch gradient descent.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::logistic::{sigmoid, softplus};
use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Tanh,
    Relu,
}

impl Activation {
    fn apply(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => a.tanh(),
            Activation::Relu => a.max(0.0),
        }
    }

    /// Derivative expressed through the pre-activation `a` and output `h`.
    fn derivative(self, a: f64, h: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - h * h,
            Activation::Relu => f64::from(u8::from(a > 0.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpParams {
    pub hidden_width: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    /// Penalty `l2 / 2 * |W|^2` on both weight layers (biases excluded).
    pub l2: f64,
    pub activation: Activation,
    pub seed: u64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden_width: 8,
            learning_rate: 0.1,
            epochs: 1000,
            l2: 1e-4,
            activation: Activation::Tanh,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    /// `hidden_width x inputs`.
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array1<f64>,
    pub b2: f64,
    pub activation: Activation,
}

impl MlpModel {
    pub fn n_inputs(&self) -> usize {
        self.w1.ncols()
    }

    pub fn hidden_width(&self) -> usize {
        self.w1.nrows()
    }

    /// Glorot-uniform hidden weights; output weights and all biases start at
    /// zero, so an untrained network predicts 0.5 everywhere.
    pub fn init(inputs: usize, width: usize, activation: Activation, seed: u64) -> Self {
        let mut rng = stream(seed, &[]);
        let limit = (6.0 / (inputs + width) as f64).sqrt();
        MlpModel {
            w1: Array2::from_shape_fn((width, inputs), |_| rng.random_range(-limit..=limit)),
            b1: Array1::zeros(width),
            w2: Array1::zeros(width),
            b2: 0.0,
            activation,
        }
    }

    /// Flat parameter vector: `w1` row-major, `b1`, `w2`, `b2`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.w1.iter().copied().collect();
        v.extend(self.b1.iter());
        v.extend(self.w2.iter());
        v.push(self.b2);
        v
    }

    pub fn from_flat(inputs: usize, width: usize, activation: Activation, theta: &[f64]) -> Self {
        let (w1, rest) = theta.split_at(width * inputs);
        let (b1, rest) = rest.split_at(width);
        let (w2, rest) = rest.split_at(width);
        MlpModel {
            w1: Array2::from_shape_vec((width, inputs), w1.to_vec()).expect("parameter layout"),
            b1: Array1::from(b1.to_vec()),
            w2: Array1::from(w2.to_vec()),
            b2: rest[0],
            activation,
        }
    }

    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        let a = self.w1.dot(&row) + &self.b1;
        let z = a.mapv(|v| self.activation.apply(v)).dot(&self.w2) + self.b2;
        sigmoid(z)
    }

    /// Mean cross-entropy plus penalty, and its gradient in flat layout.
    pub fn objective(&self, x: &Array2<f64>, y: &[usize], l2: f64) -> (f64, Vec<f64>) {
        let n = x.nrows() as f64;
        let act = self.activation;
        let a = x.dot(&self.w1.t()) + &self.b1;
        let h = a.mapv(|v| act.apply(v));
        let z = h.dot(&self.w2) + self.b2;
        let mut loss = 0.0;
        let mut dz = Array1::zeros(x.nrows());
        for i in 0..x.nrows() {
            let yi = y[i] as f64;
            loss += softplus(z[i]) - yi * z[i];
            dz[i] = (sigmoid(z[i]) - yi) / n;
        }
        loss /= n;
        loss += 0.5 * l2 * (self.w1.iter().map(|v| v * v).sum::<f64>() + self.w2.dot(&self.w2));

        let g_w2 = h.t().dot(&dz) + &self.w2.mapv(|v| l2 * v);
        let g_b2 = dz.sum();
        let mut da = dz.insert_axis(Axis(1)).dot(&self.w2.view().insert_axis(Axis(0)));
        ndarray::Zip::from(&mut da)
            .and(&a)
            .and(&h)
            .for_each(|d, &av, &hv| *d *= act.derivative(av, hv));
        let g_w1 = da.t().dot(x) + &self.w1.mapv(|v| l2 * v);
        let g_b1 = da.sum_axis(Axis(0));

        let mut grad: Vec<f64> = g_w1.iter().copied().collect();
        grad.extend(g_b1.iter());
        grad.extend(g_w2.iter());
        grad.push(g_b2);
        (loss, grad)
    }
}

/// Objective and gradient at a flat parameter vector.
pub fn mlp_objective(
    x: &Array2<f64>,
    y: &[usize],
    width: usize,
    activation: Activation,
    l2: f64,
    theta: &[f64],
) -> (f64, Vec<f64>) {
    MlpModel::from_flat(x.ncols(), width, activation, theta).objective(x, y, l2)
}

pub fn train_mlp(data: &Dataset, params: &MlpParams) -> Result<MlpModel> {
    data.check_trainable()?;
    if params.hidden_width == 0 {
        return Err(Error::invalid("hidden width must be at least 1"));
    }
    let (inputs, width) = (data.n_features(), params.hidden_width);
    let mut theta = MlpModel::init(inputs, width, params.activation, params.seed).to_flat();
    for _ in 0..params.epochs {
        let (loss, grad) = mlp_objective(&data.x, &data.y, width, params.activation, params.l2, &theta);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Diverged);
        }
        theta.iter_mut().zip(&grad).for_each(|(t, g)| *t -= params.learning_rate * g);
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged);
    }
    let model = MlpModel::from_flat(inputs, width, params.activation, &theta);
    let (loss, _) = model.objective(&data.x, &data.y, params.l2);
    if !loss.is_finite() {
        return Err(Error::Diverged);
    }
    Ok(model)
}
