//! L2-regularized logistic regression by gradient descent with backtracking.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticParams {
    /// Inverse regularization strength.
    pub c: f64,
    pub max_iter: usize,
    /// Stop once the gradient norm of the averaged objective falls below this.
    pub tol: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            c: 1.0,
            max_iter: 1000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
}

impl LinearModel {
    pub fn decision(&self, row: ArrayView1<f64>) -> f64 {
        self.bias + row.iter().zip(&self.weights).map(|(x, w)| x * w).sum::<f64>()
    }

    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        sigmoid(self.decision(row))
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Objective and gradient at `theta = [w_1..w_D, b]`:
/// `(1/N) * (sum_i [softplus(z_i) - y_i z_i] + |w|^2 / (2C))`, bias unpenalized.
pub fn logistic_objective(x: &Array2<f64>, y: &[usize], c: f64, theta: &[f64]) -> (f64, Vec<f64>) {
    let d = x.ncols();
    let n = x.nrows() as f64;
    let w = ArrayView1::from(&theta[..d]);
    let b = theta[d];
    let z: Array1<f64> = x.dot(&w) + b;
    let mut loss = 0.0;
    let mut resid = Array1::zeros(x.nrows());
    for i in 0..x.nrows() {
        let yi = y[i] as f64;
        loss += softplus(z[i]) - yi * z[i];
        resid[i] = sigmoid(z[i]) - yi;
    }
    let w_sq: f64 = w.iter().map(|v| v * v).sum();
    loss += w_sq / (2.0 * c);
    let gw = x.t().dot(&resid) + &w.mapv(|v| v / c);
    let mut grad: Vec<f64> = gw.iter().map(|g| g / n).collect();
    grad.push(resid.sum() / n);
    (loss / n, grad)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Returns the model and the objective value after every accepted step
/// (the first entry is the value at the zero start).
pub fn train_logistic_traced(data: &Dataset, params: &LogisticParams) -> Result<(LinearModel, Vec<f64>)> {
    data.check_trainable()?;
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::invalid(format!("C must be positive, got {}", params.c)));
    }
    let d = data.n_features();
    let mut theta = vec![0.0; d + 1];
    let (mut loss, mut grad) = logistic_objective(&data.x, &data.y, params.c, &theta);
    let mut history = vec![loss];
    let mut step = 1.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;

    for _ in 0..params.max_iter {
        if !loss.is_finite() {
            return Err(Error::Diverged);
        }
        let g_norm = norm(&grad);
        if g_norm < params.tol {
            break;
        }
        // Barzilai-Borwein initial trial, then Armijo backtracking.
        if let Some((t_prev, g_prev)) = &prev {
            let s: Vec<f64> = theta.iter().zip(t_prev).map(|(a, b)| a - b).collect();
            let yv: Vec<f64> = grad.iter().zip(g_prev).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&yv).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|a| a * a).sum();
            if sy > 0.0 {
                step = (ss / sy).clamp(1e-10, 1e10);
            }
        }
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - step * g).collect();
            let (l, g) = logistic_objective(&data.x, &data.y, params.c, &cand);
            if l.is_finite() && l <= loss - 1e-4 * step * g_norm * g_norm {
                accepted = Some((cand, l, g));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, l, g)) = accepted else {
            // no decrease possible at machine precision
            break;
        };
        prev = Some((std::mem::replace(&mut theta, cand), std::mem::replace(&mut grad, g)));
        loss = l;
        history.push(loss);
    }
    if theta.iter().any(|v| !v.is_finite()) || !loss.is_finite() {
        return Err(Error::Diverged);
    }
    let bias = theta.pop().unwrap();
    Ok((
        LinearModel {
            weights: theta,
            bias,
            c: params.c,
        },
        history,
    ))
}

pub fn train_logistic(data: &Dataset, params: &LogisticParams) -> Result<LinearModel> {
    train_logistic_traced(data, params).map(|(m, _)| m)
}
