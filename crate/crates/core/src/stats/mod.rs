//! Statistical primitives: kernel density estimates, overlap, rank tests,
//! binomial tails and per-feature class-separation summaries.

pub mod histogram;
pub mod kde;
pub mod rank;
pub mod special;

use serde::{Deserialize, Serialize};

pub use histogram::{class_histogram, write_histogram_csv, HistogramBin, DEFAULT_BINS};
pub use kde::{
    OVL_BANDWIDTHS, SUPPORT_BANDWIDTHS,
    kde_fit, ovl, ovl_on_grid, ovl_with_grid, silverman_bandwidth, Density, DensityEstimate,
    OverlapScale, OvlResult, DEFAULT_GRID_POINTS,
};
pub use rank::{kruskal_wallis, midranks, spearman, spearman_columns, TestResult};
pub use special::{binom_cdf, binom_sf, chi2_sf, normal_cdf};

use crate::error::Result;
use crate::features::FeatureMatrix;

/// Pairwise Spearman matrix of the feature columns.
pub fn spearman_matrix(m: &FeatureMatrix) -> Result<Vec<Vec<f64>>> {
    let columns: Vec<Vec<f64>> = (0..m.n_features()).map(|j| m.column(j)).collect();
    spearman_columns(&columns)
}

/// Class-separation summary for one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub feature: String,
    pub ovl: f64,
    pub scale: OverlapScale,
    pub kw_h: f64,
    pub kw_p: f64,
}

/// OVL of the two class densities and Kruskal-Wallis for one feature.
pub fn class_separation(feature: &str, fake: &[f64], real: &[f64]) -> Result<FeatureStats> {
    let o = ovl(&kde_fit(fake)?, &kde_fit(real)?);
    let kw = kruskal_wallis(fake, real)?;
    Ok(FeatureStats {
        feature: feature.to_string(),
        ovl: o.value,
        scale: o.scale,
        kw_h: kw.statistic,
        kw_p: kw.p_value,
    })
}

/// [`class_separation`] for every column, in column order.
pub fn feature_stats(m: &FeatureMatrix) -> Result<Vec<FeatureStats>> {
    (0..m.n_features())
        .map(|j| {
            let (fake, real) = m.split_by_label(j);
            class_separation(&m.feature_names[j], &fake, &real)
        })
        .collect()
}

/// Same as [`feature_stats`], sorted ascending by OVL (ties by name).
pub fn feature_stats_by_ovl(m: &FeatureMatrix) -> Result<Vec<FeatureStats>> {
    let mut s = feature_stats(m)?;
    s.sort_by(|a, b| a.ovl.total_cmp(&b.ovl).then_with(|| a.feature.cmp(&b.feature)));
    Ok(s)
}
