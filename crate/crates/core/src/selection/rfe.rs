//! Recursive feature elimination with a cross-validated logistic model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{evaluate_fold, log_c_grid, stratified_kfold, Fold};
use crate::learners::{constant_columns, train_logistic, Dataset, LogisticParams, ModelSpec, Standardizer};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeOptions {
    pub c_grid: Vec<f64>,
    pub cv_folds: usize,
    pub logistic: LogisticParams,
    pub seed: u64,
}

impl Default for RfeOptions {
    fn default() -> Self {
        RfeOptions {
            c_grid: log_c_grid(),
            cv_folds: 5,
            logistic: LogisticParams::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeRound {
    pub n_remaining: usize,
    pub eliminated: String,
    /// `None` when a constant column was dropped without fitting.
    pub c: Option<f64>,
    pub cv_accuracy: Option<f64>,
}

/// Result of RFE run down to `target_size` features.
///
/// Survivors are ordered by the absolute weights of the last fit, so every
/// nested set `F_1 .. F_D` is defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeTrace {
    pub feature_names: Vec<String>,
    /// First eliminated first.
    pub elimination_order: Vec<String>,
    /// Best first; `F_i` is the first `i` entries.
    pub ranking: Vec<String>,
    pub rounds: Vec<RfeRound>,
}

impl RfeTrace {
    /// `F_i` in ranking order; `F_0` is empty.
    pub fn set(&self, i: usize) -> &[String] {
        &self.ranking[..i.min(self.ranking.len())]
    }

    /// `F_1 .. F_D`.
    pub fn nested_sets(&self) -> Vec<Vec<String>> {
        (1..=self.ranking.len()).map(|i| self.set(i).to_vec()).collect()
    }

    /// The `i` for which the feature first appears in `F_i`.
    pub fn first_iteration(&self, feature: &str) -> Option<usize> {
        self.ranking.iter().position(|f| f == feature).map(|p| p + 1)
    }
}

fn folds_for(y: &[usize], k: usize, seed: u64) -> Result<Vec<Fold>> {
    let smallest = {
        let ones = y.iter().filter(|&&c| c == 1).count();
        ones.min(y.len() - ones)
    };
    // fall back to fewer folds when a class is too small for k
    let k = k.min(smallest);
    if k < 2 {
        return Err(Error::invalid("RFE needs at least two members of each class"));
    }
    stratified_kfold(y, k, seed)
}

/// Best C by mean CV accuracy (first in grid order on ties).
fn tune_c(data: &Dataset, folds: &[Fold], opts: &RfeOptions) -> Result<(f64, f64)> {
    let scores = opts
        .c_grid
        .par_iter()
        .map(|&c| {
            let spec = ModelSpec::Logistic(LogisticParams { c, ..opts.logistic.clone() });
            let accs = folds
                .iter()
                .map(|f| evaluate_fold(data, f, &spec, 0).map(|m| m.accuracy))
                .collect::<Result<Vec<_>>>()?;
            Ok(accs.iter().sum::<f64>() / accs.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    Ok((opts.c_grid[best], scores[best]))
}

/// Eliminates one feature per round until `target_size` remain.
///
/// Columns are standardized once up front. Constant columns go first (by
/// index); afterwards the feature with the smallest `|w|` of a logistic model
/// with cross-validated C is dropped, ties to the lowest index.
pub fn rfe(data: &Dataset, target_size: usize, opts: &RfeOptions) -> Result<RfeTrace> {
    data.check_trainable()?;
    let d = data.n_features();
    if target_size == 0 || target_size > d {
        return Err(Error::invalid(format!("target size {target_size} is outside 1..={d}")));
    }
    if opts.c_grid.is_empty() {
        return Err(Error::invalid("empty C grid"));
    }
    let z = Standardizer::fit(&data.x).transform_dataset(data);
    let folds = folds_for(&z.y, opts.cv_folds, derive_seed(opts.seed, &[0]))?;
    let mut remaining: Vec<usize> = (0..d).collect();
    let mut rounds = Vec::new();

    for j in constant_columns(&data.x) {
        if remaining.len() <= target_size {
            break;
        }
        remaining.retain(|&r| r != j);
        rounds.push(RfeRound {
            n_remaining: remaining.len() + 1,
            eliminated: data.feature_names[j].clone(),
            c: None,
            cv_accuracy: None,
        });
    }

    let fit_weights = |cols: &[usize]| -> Result<(f64, f64, Vec<f64>)> {
        let sub = z.columns(cols);
        let (c, acc) = tune_c(&sub, &folds, opts)?;
        let model = train_logistic(&sub, &LogisticParams { c, ..opts.logistic.clone() })?;
        Ok((c, acc, model.weights))
    };

    while remaining.len() > target_size {
        let (c, acc, w) = fit_weights(&remaining)?;
        let mut worst = 0;
        for p in 1..remaining.len() {
            if w[p].abs() < w[worst].abs() {
                worst = p;
            }
        }
        let j = remaining.remove(worst);
        log::debug!("rfe: dropped {} (|w| = {:.4}, C = {c})", data.feature_names[j], w[worst].abs());
        rounds.push(RfeRound {
            n_remaining: remaining.len() + 1,
            eliminated: data.feature_names[j].clone(),
            c: Some(c),
            cv_accuracy: Some(acc),
        });
    }

    let mut survivors = remaining.clone();
    if survivors.len() > 1 {
        let (_, _, w) = fit_weights(&remaining)?;
        let mut order: Vec<usize> = (0..remaining.len()).collect();
        order.sort_by(|&a, &b| w[b].abs().total_cmp(&w[a].abs()).then(remaining[a].cmp(&remaining[b])));
        survivors = order.into_iter().map(|p| remaining[p]).collect();
    }
    let elimination_order: Vec<String> = rounds.iter().map(|r| r.eliminated.clone()).collect();
    let ranking = survivors
        .iter()
        .map(|&j| data.feature_names[j].clone())
        .chain(elimination_order.iter().rev().cloned())
        .collect();
    Ok(RfeTrace {
        feature_names: data.feature_names.clone(),
        elimination_order,
        ranking,
        rounds,
    })
}
