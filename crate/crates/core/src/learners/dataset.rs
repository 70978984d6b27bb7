use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

/// Design matrix with binary labels (1 = fake, 0 = real).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Array2<f64>,
    pub y: Vec<usize>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(x: Array2<f64>, y: Vec<usize>, feature_names: Vec<String>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                got: y.len(),
            });
        }
        if x.ncols() != feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: feature_names.len(),
                got: x.ncols(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dataset contains NaN or infinite values"));
        }
        if let Some(bad) = y.iter().find(|&&c| c > 1) {
            return Err(Error::invalid(format!("label {bad} is not binary")));
        }
        Ok(Dataset { x, y, feature_names })
    }

    /// Unnamed columns `x0, x1, ...`.
    pub fn unnamed(x: Array2<f64>, y: Vec<usize>) -> Result<Self> {
        let names = (0..x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(x, y, names)
    }

    pub fn from_matrix(m: &FeatureMatrix) -> Result<Self> {
        let d = m.n_features();
        let flat: Vec<f64> = m.rows.iter().flat_map(|r| r.values.iter().copied()).collect();
        let x = Array2::from_shape_vec((m.n_rows(), d), flat)
            .map_err(|e| Error::invalid(e.to_string()))?;
        let y = m.rows.iter().map(|r| r.label.class_index()).collect();
        Self::new(x, y, m.feature_names.clone())
    }

    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.y.iter().filter(|&&c| c == 1).count();
        [self.y.len() - ones, ones]
    }

    /// Training precondition: at least two rows and both classes present.
    pub fn check_trainable(&self) -> Result<()> {
        if self.n_samples() < 2 {
            return Err(Error::invalid("training needs at least two samples"));
        }
        if self.class_counts().contains(&0) {
            return Err(Error::invalid("training needs both classes"));
        }
        Ok(())
    }

    pub fn rows(&self, idx: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select(Axis(0), idx),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub fn columns(&self, cols: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select(Axis(1), cols),
            y: self.y.clone(),
            feature_names: cols.iter().map(|&j| self.feature_names[j].clone()).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Array1<f64> {
        self.x.column(j).to_owned()
    }
}

/// Per-column z-scoring fitted on one matrix and applied to others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation; constant columns keep scale 1.
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &Array2<f64>) -> Self {
        let n = x.nrows().max(1) as f64;
        let mut mean = Vec::with_capacity(x.ncols());
        let mut scale = Vec::with_capacity(x.ncols());
        for col in x.columns() {
            let m = col.sum() / n;
            let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
            let sd = var.sqrt();
            mean.push(m);
            scale.push(if sd > 1e-12 * m.abs().max(1.0) { sd } else { 1.0 });
        }
        Standardizer { mean, scale }
    }

    pub fn transform(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|v| (v - self.mean[j]) / self.scale[j]);
        }
        out
    }

    pub fn transform_dataset(&self, d: &Dataset) -> Dataset {
        Dataset {
            x: self.transform(&d.x),
            y: d.y.clone(),
            feature_names: d.feature_names.clone(),
        }
    }
}

/// Indices of columns with a single distinct value.
pub fn constant_columns(x: &Array2<f64>) -> Vec<usize> {
    x.columns()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.iter().all(|&v| v == c[0]))
        .map(|(j, _)| j)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn validation() {
        assert!(Dataset::unnamed(array![[1.0], [f64::NAN]], vec![0, 1]).is_err());
        assert!(Dataset::unnamed(array![[1.0], [2.0]], vec![0]).is_err());
        assert!(Dataset::unnamed(array![[1.0], [2.0]], vec![0, 2]).is_err());
        let one_class = Dataset::unnamed(array![[1.0], [2.0]], vec![1, 1]).unwrap();
        assert!(one_class.check_trainable().is_err());
    }

    #[test]
    fn standardizer_zero_mean_unit_variance() {
        let x = array![[1.0, 5.0], [3.0, 5.0], [5.0, 5.0]];
        let s = Standardizer::fit(&x);
        let z = s.transform(&x);
        assert!((z.column(0).sum()).abs() < 1e-12);
        assert!((z.column(0).mapv(|v| v * v).sum() / 3.0 - 1.0).abs() < 1e-12);
        assert_eq!(z.column(1).to_vec(), vec![0.0, 0.0, 0.0]);
        assert_eq!(constant_columns(&x), vec![1]);
    }
}
