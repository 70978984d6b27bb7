//! All-relevant selection against permuted shadow features.

use ndarray::{concatenate, Array2, Axis};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{train_forest, Dataset, ForestParams};
use crate::rng::{derive_seed, stream};
use crate::stats::{binom_cdf, binom_sf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Relevant,
    Tentative,
    NotRelevant,
}

impl Zone {
    /// Binomial decision with Bonferroni-corrected `alpha / n_features`.
    pub fn classify(hits: usize, n_iterations: usize, alpha: f64, n_features: usize) -> Zone {
        let cutoff = alpha / n_features.max(1) as f64;
        let (h, n) = (hits as u64, n_iterations as u64);
        if binom_sf(h, n, 0.5) < cutoff {
            Zone::Relevant
        } else if binom_cdf(h, n, 0.5) < cutoff {
            Zone::NotRelevant
        } else {
            Zone::Tentative
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Zone::Relevant => "relevant",
            Zone::Tentative => "tentative",
            Zone::NotRelevant => "not_relevant",
        }
    }

    /// Label used in the hit-count table: High, Medium or Low.
    pub fn scale(self) -> &'static str {
        match self {
            Zone::Relevant => "High",
            Zone::Tentative => "Medium",
            Zone::NotRelevant => "Low",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BorutaParams {
    pub n_iterations: usize,
    pub alpha: f64,
    pub forest: ForestParams,
    pub seed: u64,
}

impl Default for BorutaParams {
    fn default() -> Self {
        BorutaParams {
            n_iterations: 100,
            alpha: 0.05,
            forest: ForestParams::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorutaVerdict {
    pub feature: String,
    pub hits: usize,
    pub zone: Zone,
}

/// Appends one row-permuted copy of every column. Column `j`'s permutation
/// comes from `stream(seed, [iteration, j])`.
pub fn with_shadows(x: &Array2<f64>, seed: u64, iteration: usize) -> Array2<f64> {
    let n = x.nrows();
    let mut shadow = x.clone();
    for (j, mut col) in shadow.columns_mut().into_iter().enumerate() {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut stream(seed, &[0, iteration as u64, j as u64]));
        let original: Vec<f64> = col.to_vec();
        for (dst, &src) in col.iter_mut().zip(&perm) {
            *dst = original[src];
        }
    }
    concatenate![Axis(1), x.view(), shadow.view()]
}

/// Per-iteration hit vectors (true when the feature beat the best shadow).
///
/// The augmented columns are placed in a random order each iteration: the
/// tree's lowest-index tie-break would otherwise favour whichever group sits
/// first.
pub fn boruta_hits(data: &Dataset, params: &BorutaParams) -> Result<Vec<Vec<bool>>> {
    data.check_trainable()?;
    let d = data.n_features();
    (0..params.n_iterations)
        .into_par_iter()
        .map(|it| {
            let augmented = with_shadows(&data.x, params.seed, it);
            let mut placement: Vec<usize> = (0..2 * d).collect();
            placement.shuffle(&mut stream(params.seed, &[2, it as u64]));
            let x = augmented.select(Axis(1), &placement);
            let names = placement.iter().map(|j| format!("c{j}")).collect();
            let extended = Dataset::new(x, data.y.clone(), names)?;
            let forest = train_forest(
                &extended,
                &ForestParams {
                    seed: derive_seed(params.seed, &[1, it as u64]),
                    ..params.forest.clone()
                },
            )?;
            let mut imp = vec![0.0; 2 * d];
            for (pos, &j) in placement.iter().enumerate() {
                imp[j] = forest.raw_importance[pos];
            }
            let threshold = imp[d..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(imp[..d].iter().map(|&v| v > threshold).collect())
        })
        .collect()
}

pub fn boruta(data: &Dataset, params: &BorutaParams) -> Result<Vec<BorutaVerdict>> {
    if params.n_iterations < 10 {
        return Err(Error::invalid("boruta needs at least 10 iterations"));
    }
    let hits = boruta_hits(data, params)?;
    let d = data.n_features();
    Ok((0..d)
        .map(|j| {
            let h = hits.iter().filter(|row| row[j]).count();
            BorutaVerdict {
                feature: data.feature_names[j].clone(),
                hits: h,
                zone: Zone::classify(h, params.n_iterations, params.alpha, d),
            }
        })
        .collect())
}
