//! From-scratch binary classifiers behind one train/predict interface.
//!
//! Class 1 is the positive (fake) class throughout.

pub mod dataset;
pub mod forest;
pub mod logistic;
pub mod mlp;
pub mod naive_bayes;
pub mod tree;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

pub use dataset::{constant_columns, Dataset, Standardizer};
pub use forest::{train_forest, ForestParams, RandomForest};
pub use logistic::{logistic_objective, train_logistic, train_logistic_traced, LinearModel, LogisticParams};
pub use mlp::{mlp_objective, train_mlp, Activation, MlpModel, MlpParams};
pub use naive_bayes::{train_gnb, GaussianNb};
pub use tree::{
    impurity_decrease, train_tree, DecisionTree, Impurity, MaxFeatures, SplitWeighting, TreeNode,
    TreeParams,
};

use crate::error::{Error, Result};

/// Labels (argmax, class 1 only when strictly more likely) and `[P(0), P(1)]` per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub labels: Vec<usize>,
    pub proba: Vec<[f64; 2]>,
}

impl Prediction {
    fn from_positive(p1: impl IntoIterator<Item = f64>) -> Self {
        let proba: Vec<[f64; 2]> = p1
            .into_iter()
            .map(|p| {
                let p = p.clamp(0.0, 1.0);
                [1.0 - p, p]
            })
            .collect();
        Prediction {
            labels: proba.iter().map(|p| usize::from(p[1] > p[0])).collect(),
            proba,
        }
    }
}

/// A trained model of any kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    DecisionTree(DecisionTree),
    RandomForest(RandomForest),
    Logistic(LinearModel),
    NaiveBayes(GaussianNb),
    Mlp(MlpModel),
}

impl Model {
    pub fn n_features(&self) -> usize {
        match self {
            Model::DecisionTree(m) => m.n_features,
            Model::RandomForest(m) => m.n_features(),
            Model::Logistic(m) => m.weights.len(),
            Model::NaiveBayes(m) => m.n_features(),
            Model::Mlp(m) => m.n_inputs(),
        }
    }

    pub fn predict(&self, x: &Array2<f64>) -> Result<Prediction> {
        if x.ncols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: x.ncols(),
            });
        }
        let rows = x.rows().into_iter();
        Ok(match self {
            Model::DecisionTree(m) => Prediction::from_positive(rows.map(|r| m.predict_row(r))),
            Model::RandomForest(m) => Prediction::from_positive(rows.map(|r| m.predict_row(r))),
            Model::Logistic(m) => Prediction::from_positive(rows.map(|r| m.predict_row(r))),
            Model::Mlp(m) => Prediction::from_positive(rows.map(|r| m.predict_row(r))),
            Model::NaiveBayes(m) => {
                let proba: Vec<[f64; 2]> = rows.map(|r| m.posterior(r)).collect();
                Prediction {
                    labels: proba.iter().map(|p| usize::from(p[1] > p[0])).collect(),
                    proba,
                }
            }
        })
    }
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SavedModel {
    format_version: u32,
    model: Model,
}

impl Model {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SavedModel {
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let saved: SavedModel = serde_json::from_str(s)?;
        if saved.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "model format version {} is not supported",
                saved.format_version
            )));
        }
        Ok(saved.model)
    }
}

/// Classifier family plus hyperparameters; the seed is supplied at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    DecisionTree(TreeParams),
    RandomForest(ForestParams),
    Logistic(LogisticParams),
    NaiveBayes,
    Mlp(MlpParams),
}

impl ModelSpec {
    pub fn fit(&self, data: &Dataset, seed: u64) -> Result<Model> {
        Ok(match self {
            ModelSpec::DecisionTree(p) => Model::DecisionTree(train_tree(data, &TreeParams { seed, ..p.clone() })?),
            ModelSpec::RandomForest(p) => Model::RandomForest(train_forest(data, &ForestParams { seed, ..p.clone() })?),
            ModelSpec::Logistic(p) => Model::Logistic(train_logistic(data, p)?),
            ModelSpec::NaiveBayes => Model::NaiveBayes(train_gnb(data)?),
            ModelSpec::Mlp(p) => Model::Mlp(train_mlp(data, &MlpParams { seed, ..p.clone() })?),
        })
    }
}
