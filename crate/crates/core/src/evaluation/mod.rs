//! Metrics, stratified cross-validation, grid search and the experiment grid
//! over nested feature subsets.

pub mod cv;
pub mod metrics;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cv::{
    evaluate_fold, grid_search_cv, grid_search_folds, stratified_kfold, CvSummary, Fold, GridPoint,
    GridSearchResult,
};
pub use metrics::{compute_metrics, Metrics};

use crate::error::{Error, Result};
use crate::learners::{Dataset, ForestParams, LogisticParams, MlpParams, ModelSpec, TreeParams};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classifier {
    Dt,
    Rf,
    Lr,
    Nb,
    Mlp,
}

impl Classifier {
    pub const ALL: [Classifier; 5] = [Classifier::Dt, Classifier::Rf, Classifier::Lr, Classifier::Nb, Classifier::Mlp];

    pub fn key(self) -> &'static str {
        match self {
            Classifier::Dt => "dt",
            Classifier::Rf => "rf",
            Classifier::Lr => "lr",
            Classifier::Nb => "nb",
            Classifier::Mlp => "mlp",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Classifier::Dt => "DT",
            Classifier::Rf => "RF",
            Classifier::Lr => "LR",
            Classifier::Nb => "NB",
            Classifier::Mlp => "MLP",
        }
    }

    pub fn default_grid(self) -> Vec<ModelSpec> {
        match self {
            Classifier::Dt => [Some(2), Some(4), Some(8), None]
                .into_iter()
                .map(|max_depth| ModelSpec::DecisionTree(TreeParams { max_depth, ..Default::default() }))
                .collect(),
            Classifier::Rf => [100, 300]
                .into_iter()
                .flat_map(|n_trees| {
                    [Some(4), None].into_iter().map(move |max_depth| {
                        ModelSpec::RandomForest(ForestParams { n_trees, max_depth, ..Default::default() })
                    })
                })
                .collect(),
            Classifier::Lr => log_c_grid()
                .into_iter()
                .map(|c| ModelSpec::Logistic(LogisticParams { c, ..Default::default() }))
                .collect(),
            Classifier::Nb => vec![ModelSpec::NaiveBayes],
            Classifier::Mlp => [4, 8, 16]
                .into_iter()
                .flat_map(|hidden_width| {
                    [0.01, 0.1].into_iter().map(move |learning_rate| {
                        ModelSpec::Mlp(MlpParams { hidden_width, learning_rate, ..Default::default() })
                    })
                })
                .collect(),
        }
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Classifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Classifier::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::invalid(format!("unknown classifier {s:?} (expected dt, rf, lr, nb or mlp)")))
    }
}

/// Nine values of C from 1e-4 to 1e4, one per decade.
pub fn log_c_grid() -> Vec<f64> {
    (-4..=4).map(|e| 10f64.powi(e)).collect()
}

/// Per-classifier grid overrides, read from JSON such as
/// `{"dt": [{"kind": "decision_tree", "max_depth": 3}]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridConfig(pub BTreeMap<Classifier, Vec<ModelSpec>>);

impl GridConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: GridConfig = serde_json::from_str(s)?;
        if let Some((c, _)) = cfg.0.iter().find(|(_, g)| g.is_empty()) {
            return Err(Error::invalid(format!("empty grid for {c}")));
        }
        Ok(cfg)
    }

    pub fn grid_for(&self, c: Classifier) -> Vec<ModelSpec> {
        self.0.get(&c).cloned().unwrap_or_else(|| c.default_grid())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCell {
    pub classifier: Classifier,
    pub n_features: usize,
    pub features: Vec<String>,
    pub accuracy: f64,
    pub f1: f64,
    pub best_params: ModelSpec,
    pub search: Vec<GridPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSummary {
    pub classifier: Classifier,
    pub max_accuracy: f64,
    pub accuracy_n_features: usize,
    pub max_f1: f64,
    pub f1_n_features: usize,
    pub mean_accuracy: f64,
    pub mean_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    pub classifiers: Vec<Classifier>,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<Fold>,
    /// Classifier-major, then subset size ascending.
    pub cells: Vec<EvalCell>,
    pub summaries: Vec<ClassifierSummary>,
}

/// Evaluates every classifier on every nested subset `F_1 .. F_D`, each with
/// its own grid search over the same folds.
pub fn run_experiment(
    data: &Dataset,
    nested_sets: &[Vec<String>],
    grids: &[(Classifier, Vec<ModelSpec>)],
    k: usize,
    seed: u64,
) -> Result<EvalGrid> {
    for (i, set) in nested_sets.iter().enumerate() {
        if set.len() != i + 1 {
            return Err(Error::invalid(format!("subset {} has {} features", i + 1, set.len())));
        }
    }
    let folds = stratified_kfold(&data.y, k, derive_seed(seed, &[0]))?;
    let column_sets: Vec<Vec<usize>> = nested_sets
        .iter()
        .map(|set| {
            set.iter()
                .map(|name| {
                    data.feature_names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| Error::invalid(format!("unknown feature {name:?}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..grids.len())
        .flat_map(|c| (0..nested_sets.len()).map(move |i| (c, i)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(c, i)| {
            let (classifier, grid) = &grids[c];
            let subset = data.columns(&column_sets[i]);
            let cell_seed = derive_seed(seed, &[1, *classifier as u64, i as u64]);
            let r = grid_search_folds(&subset, grid, &folds, cell_seed)?;
            Ok(EvalCell {
                classifier: *classifier,
                n_features: i + 1,
                features: nested_sets[i].clone(),
                accuracy: r.cv.accuracy,
                f1: r.cv.f1,
                best_params: r.best_spec,
                search: r.points,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summaries = grids
        .iter()
        .map(|(classifier, _)| {
            let mine: Vec<&EvalCell> = cells.iter().filter(|c| c.classifier == *classifier).collect();
            let argmax = |f: fn(&EvalCell) -> f64| {
                mine.iter()
                    .fold(None::<&EvalCell>, |best, c| match best {
                        Some(b) if f(b) >= f(c) => Some(b),
                        _ => Some(c),
                    })
                    .map_or((0.0, 0), |c| (f(c), c.n_features))
            };
            let (max_accuracy, accuracy_n_features) = argmax(|c| c.accuracy);
            let (max_f1, f1_n_features) = argmax(|c| c.f1);
            let n = mine.len().max(1) as f64;
            ClassifierSummary {
                classifier: *classifier,
                max_accuracy,
                accuracy_n_features,
                max_f1,
                f1_n_features,
                mean_accuracy: mine.iter().map(|c| c.accuracy).sum::<f64>() / n,
                mean_f1: mine.iter().map(|c| c.f1).sum::<f64>() / n,
            }
        })
        .collect();

    Ok(EvalGrid {
        classifiers: grids.iter().map(|(c, _)| *c).collect(),
        k,
        seed,
        folds,
        cells,
        summaries,
    })
}

impl EvalGrid {
    pub fn cell(&self, classifier: Classifier, n_features: usize) -> Option<&EvalCell> {
        self.cells
            .iter()
            .find(|c| c.classifier == classifier && c.n_features == n_features)
    }

    pub fn n_subsets(&self) -> usize {
        self.cells.iter().map(|c| c.n_features).max().unwrap_or(0)
    }

    /// Rows `1..=D` plus `Average`; an accuracy and F1 column per classifier.
    pub fn write_grid_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["n_features".to_string()];
        for c in &self.classifiers {
            header.push(format!("{}_accuracy", c.display_name()));
            header.push(format!("{}_f1", c.display_name()));
        }
        wtr.write_record(&header)?;
        for i in 1..=self.n_subsets() {
            let mut rec = vec![i.to_string()];
            for &c in &self.classifiers {
                let cell = self.cell(c, i).expect("complete grid");
                rec.push(format!("{:.6}", cell.accuracy));
                rec.push(format!("{:.6}", cell.f1));
            }
            wtr.write_record(&rec)?;
        }
        let mut avg = vec!["Average".to_string()];
        for s in &self.summaries {
            avg.push(format!("{:.6}", s.mean_accuracy));
            avg.push(format!("{:.6}", s.mean_f1));
        }
        wtr.write_record(&avg)?;
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn write_max_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["classifier", "max_accuracy", "accuracy_n_features", "max_f1", "f1_n_features"])?;
        for s in &self.summaries {
            wtr.write_record([
                s.classifier.display_name().to_string(),
                format!("{:.6}", s.max_accuracy),
                s.accuracy_n_features.to_string(),
                format!("{:.6}", s.max_f1),
                s.f1_n_features.to_string(),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}
