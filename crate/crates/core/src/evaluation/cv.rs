use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, Metrics};
use crate::error::{Error, Result};
use crate::learners::{Dataset, Model, ModelSpec, Standardizer};
use crate::rng::{derive_seed, stream};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold split.
///
/// Each class is shuffled with its own stream, the classes are concatenated and
/// positions are dealt to folds round-robin. `k == y.len()` gives leave-one-out.
pub fn stratified_kfold(y: &[usize], k: usize, seed: u64) -> Result<Vec<Fold>> {
    let n = y.len();
    if k < 2 || k > n {
        return Err(Error::invalid(format!("k = {k} is outside 2..={n}")));
    }
    let mut order = Vec::with_capacity(n);
    for class in 0..2usize {
        let mut members: Vec<usize> = (0..n).filter(|&i| y[i] == class).collect();
        if k < n && !members.is_empty() && members.len() < k {
            return Err(Error::invalid(format!(
                "class {class} has {} members, fewer than k = {k}",
                members.len()
            )));
        }
        members.shuffle(&mut stream(seed, &[class as u64]));
        order.extend(members);
    }
    let mut tests = vec![Vec::new(); k];
    for (pos, &i) in order.iter().enumerate() {
        tests[pos % k].push(i);
    }
    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let train = (0..n).filter(|i| test.binary_search(i).is_err()).collect();
            Fold { train, test }
        })
        .collect())
}

/// Standardizes on the training fold, fits, and scores the test fold.
pub fn evaluate_fold(data: &Dataset, fold: &Fold, spec: &ModelSpec, seed: u64) -> Result<Metrics> {
    let train = data.rows(&fold.train);
    let test = data.rows(&fold.test);
    let scaler = Standardizer::fit(&train.x);
    let model = spec.fit(&scaler.transform_dataset(&train), seed)?;
    let pred = model.predict(&scaler.transform(&test.x))?;
    compute_metrics(&test.y, &pred.labels, 1)
}

/// Unweighted means over folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub folds: Vec<Metrics>,
}

impl CvSummary {
    pub fn from_folds(folds: Vec<Metrics>) -> Self {
        let n = folds.len() as f64;
        let mean = |f: fn(&Metrics) -> f64| folds.iter().map(f).sum::<f64>() / n;
        CvSummary {
            accuracy: mean(|m| m.accuracy),
            precision: mean(|m| m.precision),
            recall: mean(|m| m.recall),
            f1: mean(|m| m.f1),
            folds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub spec: ModelSpec,
    pub cv: Option<CvSummary>,
    /// First trainer error on any fold; such points are disqualified.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_index: usize,
    pub best_spec: ModelSpec,
    pub cv: CvSummary,
    pub points: Vec<GridPoint>,
    /// Best point refit on all rows (standardized with `scaler`).
    pub model: Model,
    pub scaler: Standardizer,
}

/// Grid search over precomputed folds. Point `p` on fold `f` trains with
/// seed `derive_seed(seed, [p, f])`.
pub fn grid_search_folds(data: &Dataset, grid: &[ModelSpec], folds: &[Fold], seed: u64) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::invalid("empty hyperparameter grid"));
    }
    let points: Vec<GridPoint> = grid
        .par_iter()
        .enumerate()
        .map(|(p, spec)| {
            let results: Vec<Result<Metrics>> = folds
                .par_iter()
                .enumerate()
                .map(|(f, fold)| evaluate_fold(data, fold, spec, derive_seed(seed, &[p as u64, f as u64])))
                .collect();
            match results.into_iter().collect::<Result<Vec<_>>>() {
                Ok(m) => GridPoint {
                    spec: spec.clone(),
                    cv: Some(CvSummary::from_folds(m)),
                    error: None,
                },
                Err(e) => GridPoint {
                    spec: spec.clone(),
                    cv: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (p, pt) in points.iter().enumerate() {
        if let Some(cv) = &pt.cv {
            if best.is_none_or(|(_, acc)| cv.accuracy > acc) {
                best = Some((p, cv.accuracy));
            }
        }
    }
    let Some((best_index, _)) = best else {
        let first = points[0].error.clone().unwrap_or_default();
        return Err(Error::invalid(format!("every grid point failed; first error: {first}")));
    };
    let scaler = Standardizer::fit(&data.x);
    let model = grid[best_index].fit(
        &scaler.transform_dataset(data),
        derive_seed(seed, &[best_index as u64, u64::MAX]),
    )?;
    Ok(GridSearchResult {
        best_index,
        best_spec: grid[best_index].clone(),
        cv: points[best_index].cv.clone().expect("best point has scores"),
        points,
        model,
        scaler,
    })
}

pub fn grid_search_cv(data: &Dataset, grid: &[ModelSpec], k: usize, seed: u64) -> Result<GridSearchResult> {
    let folds = stratified_kfold(&data.y, k, derive_seed(seed, &[0]))?;
    grid_search_folds(data, grid, &folds, derive_seed(seed, &[1]))
}
