//! Gaussian naive Bayes.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::Result;

pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    /// `means[c][j]`.
    pub means: [Vec<f64>; 2],
    /// Maximum-likelihood variances, floored at [`VARIANCE_FLOOR`].
    pub variances: [Vec<f64>; 2],
    pub priors: [f64; 2],
}

pub fn train_gnb(data: &Dataset) -> Result<GaussianNb> {
    data.check_trainable()?;
    let d = data.n_features();
    let counts = data.class_counts();
    let mut means = [vec![0.0; d], vec![0.0; d]];
    let mut vars = [vec![0.0; d], vec![0.0; d]];
    for (i, row) in data.x.rows().into_iter().enumerate() {
        let c = data.y[i];
        for j in 0..d {
            means[c][j] += row[j];
        }
    }
    for c in 0..2 {
        means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
    }
    for (i, row) in data.x.rows().into_iter().enumerate() {
        let c = data.y[i];
        for j in 0..d {
            vars[c][j] += (row[j] - means[c][j]).powi(2);
        }
    }
    for c in 0..2 {
        vars[c]
            .iter_mut()
            .for_each(|v| *v = (*v / counts[c] as f64).max(VARIANCE_FLOOR));
    }
    let n = data.n_samples() as f64;
    Ok(GaussianNb {
        means,
        variances: vars,
        priors: [counts[0] as f64 / n, counts[1] as f64 / n],
    })
}

impl GaussianNb {
    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }

    pub fn log_joint(&self, row: ArrayView1<f64>) -> [f64; 2] {
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = self.priors[c].ln()
                + row
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let v = self.variances[c][j];
                        -0.5 * (2.0 * std::f64::consts::PI * v).ln() - (x - self.means[c][j]).powi(2) / (2.0 * v)
                    })
                    .sum::<f64>();
        }
        out
    }

    /// Class posteriors by log-sum-exp normalization.
    pub fn posterior(&self, row: ArrayView1<f64>) -> [f64; 2] {
        let lj = self.log_joint(row);
        let m = lj[0].max(lj[1]);
        let e = [(lj[0] - m).exp(), (lj[1] - m).exp()];
        let s = e[0] + e[1];
        let p1 = e[1] / s;
        [1.0 - p1, p1]
    }
}
