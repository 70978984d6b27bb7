//! Bagged random forest with mean-decrease-in-impurity importances.

use ndarray::ArrayView1;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{train_tree_on, DecisionTree, Impurity, MaxFeatures, SplitWeighting, TreeParams};
use super::Dataset;
use crate::error::Result;
use crate::rng::{derive_seed, stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub impurity: Impurity,
    pub max_features: MaxFeatures,
    pub weighting: SplitWeighting,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            min_samples_leaf: 1,
            impurity: Impurity::Gini,
            max_features: MaxFeatures::Sqrt,
            weighting: SplitWeighting::NodeFraction,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestParams {
    fn tree_params(&self, seed: u64) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            min_samples_leaf: self.min_samples_leaf,
            impurity: self.impurity,
            max_features: self.max_features,
            weighting: self.weighting,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub trees: Vec<DecisionTree>,
    /// Seed of each tree's stream, derived from (forest seed, tree index).
    pub tree_seeds: Vec<u64>,
    /// Mean over trees of the per-tree importance sums, before normalization.
    pub raw_importance: Vec<f64>,
    pub params: ForestParams,
}

pub fn train_forest(data: &Dataset, params: &ForestParams) -> Result<RandomForest> {
    data.check_trainable()?;
    let n = data.n_samples();
    let seeds: Vec<u64> = (0..params.n_trees as u64)
        .map(|t| derive_seed(params.seed, &[t]))
        .collect();
    let trees = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = stream(s, &[]);
            let sample: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            train_tree_on(data, &sample, &params.tree_params(s), rng)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut raw = vec![0.0; data.n_features()];
    for t in &trees {
        for (acc, v) in raw.iter_mut().zip(t.importance_sums()) {
            *acc += v;
        }
    }
    let nt = trees.len().max(1) as f64;
    raw.iter_mut().for_each(|v| *v /= nt);
    Ok(RandomForest {
        trees,
        tree_seeds: seeds,
        raw_importance: raw,
        params: params.clone(),
    })
}

/// Scales to sum 1; all zeros stay zero.
pub fn normalize(v: &[f64]) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter().map(|x| x / total).collect()
    } else {
        vec![0.0; v.len()]
    }
}

impl RandomForest {
    pub fn n_features(&self) -> usize {
        self.raw_importance.len()
    }

    /// Normalized importances (sum 1 whenever any tree split).
    pub fn importance(&self) -> Vec<f64> {
        normalize(&self.raw_importance)
    }

    /// Mean of the trees' leaf class-1 fractions.
    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        let s: f64 = self.trees.iter().map(|t| t.predict_row(row)).sum();
        (s / self.trees.len() as f64).clamp(0.0, 1.0)
    }
}
