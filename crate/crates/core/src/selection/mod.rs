//! Feature selection: RFE, Boruta and random-forest ranking, joined into one
//! per-feature report.

pub mod boruta;
pub mod rfe;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use boruta::{boruta, boruta_hits, with_shadows, BorutaParams, BorutaVerdict, Zone};
pub use rfe::{rfe, RfeOptions, RfeRound, RfeTrace};

use crate::error::{Error, Result};
use crate::features::SPARSE_FEATURES;
use crate::learners::{train_forest, Dataset, ForestParams};
use crate::rng::derive_seed;
use crate::stats::{class_separation, spearman, OverlapScale, TestResult};

/// Features by normalized forest importance, descending (ties by column index).
pub fn rank_by_rf_importance(data: &Dataset, params: &ForestParams) -> Result<Vec<(String, f64)>> {
    let imp = train_forest(data, params)?.importance();
    let mut order: Vec<usize> = (0..imp.len()).collect();
    order.sort_by(|&a, &b| imp[b].total_cmp(&imp[a]).then(a.cmp(&b)));
    Ok(order
        .into_iter()
        .map(|j| (data.feature_names[j].clone(), imp[j]))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOptions {
    pub seed: u64,
    pub forest: ForestParams,
    pub boruta: BorutaParams,
    pub rfe: RfeOptions,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            seed: 42,
            forest: ForestParams { n_trees: 500, ..Default::default() },
            boruta: BorutaParams::default(),
            rfe: RfeOptions::default(),
        }
    }
}

impl SelectionOptions {
    /// The RFE settings [`build_selection_report`] runs with, seed included.
    pub fn rfe_options(&self) -> RfeOptions {
        RfeOptions { seed: derive_seed(self.seed, &[12]), ..self.rfe.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRow {
    pub feature: String,
    pub rf_importance: f64,
    pub rf_rank: usize,
    pub ovl: f64,
    pub scale: OverlapScale,
    pub kw_h: f64,
    pub kw_p: f64,
    pub rfe_first_iteration: usize,
    pub boruta_hits: usize,
    pub boruta_zone: Zone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Column order of the input.
    pub rows: Vec<SelectionRow>,
    /// Spearman rho between importance and OVL over all features.
    pub rho_importance_ovl: Option<TestResult>,
    /// The same with the sparse count features left out.
    pub rho_importance_ovl_dense: Option<TestResult>,
    pub excluded_sparse: Vec<String>,
    pub boruta_iterations: usize,
    pub boruta_alpha: f64,
    pub rfe: RfeTrace,
}

fn rho(rows: &[&SelectionRow]) -> Option<TestResult> {
    let imp: Vec<f64> = rows.iter().map(|r| r.rf_importance).collect();
    let ovl: Vec<f64> = rows.iter().map(|r| r.ovl).collect();
    match spearman(&imp, &ovl) {
        Ok(t) => Some(t),
        Err(e) => {
            log::warn!("importance/OVL correlation unavailable: {e}");
            None
        }
    }
}

/// Runs every per-feature analysis on raw (unstandardized) data.
pub fn build_selection_report(data: &Dataset, opts: &SelectionOptions) -> Result<SelectionReport> {
    data.check_trainable()?;
    let d = data.n_features();
    let ranking = rank_by_rf_importance(
        data,
        &ForestParams { seed: derive_seed(opts.seed, &[10]), ..opts.forest.clone() },
    )?;
    let verdicts = boruta(
        data,
        &BorutaParams { seed: derive_seed(opts.seed, &[11]), ..opts.boruta.clone() },
    )?;
    let trace = rfe(data, 1, &opts.rfe_options())?;

    let rows = (0..d)
        .map(|j| {
            let name = &data.feature_names[j];
            let (mut fake, mut real) = (Vec::new(), Vec::new());
            for (i, &y) in data.y.iter().enumerate() {
                if y == 1 { fake.push(data.x[[i, j]]) } else { real.push(data.x[[i, j]]) }
            }
            let sep = class_separation(name, &fake, &real)?;
            let rank = ranking.iter().position(|(n, _)| n == name).expect("ranked");
            Ok(SelectionRow {
                feature: name.clone(),
                rf_importance: ranking[rank].1,
                rf_rank: rank + 1,
                ovl: sep.ovl,
                scale: sep.scale,
                kw_h: sep.kw_h,
                kw_p: sep.kw_p,
                rfe_first_iteration: trace.first_iteration(name).expect("ranked by rfe"),
                boruta_hits: verdicts[j].hits,
                boruta_zone: verdicts[j].zone,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let all: Vec<&SelectionRow> = rows.iter().collect();
    let dense: Vec<&SelectionRow> = rows
        .iter()
        .filter(|r| !SPARSE_FEATURES.contains(&r.feature.as_str()))
        .collect();
    let excluded_sparse = rows
        .iter()
        .filter(|r| SPARSE_FEATURES.contains(&r.feature.as_str()))
        .map(|r| r.feature.clone())
        .collect();
    Ok(SelectionReport {
        rho_importance_ovl: rho(&all),
        rho_importance_ovl_dense: if dense.len() >= 3 { rho(&dense) } else { None },
        rows,
        excluded_sparse,
        boruta_iterations: opts.boruta.n_iterations,
        boruta_alpha: opts.boruta.alpha,
        rfe: trace,
    })
}

impl SelectionReport {
    pub fn row(&self, feature: &str) -> Option<&SelectionRow> {
        self.rows.iter().find(|r| r.feature == feature)
    }

    /// Rows by descending importance.
    pub fn by_importance(&self) -> Vec<&SelectionRow> {
        let mut v: Vec<&SelectionRow> = self.rows.iter().collect();
        v.sort_by_key(|r| r.rf_rank);
        v
    }

    /// One row per feature in importance order, with the hit-count table
    /// columns followed by the overlap columns.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record([
            "feature",
            "rf_significance",
            "appears_on_iteration",
            "boruta_hits",
            "boruta_scale",
            "ovl",
            "scale",
            "kw_h",
            "kw_p",
        ])?;
        for r in self.by_importance() {
            wtr.write_record([
                r.feature.clone(),
                format!("{:.6}", r.rf_importance),
                r.rfe_first_iteration.to_string(),
                r.boruta_hits.to_string(),
                r.boruta_zone.scale().to_string(),
                format!("{:.6}", r.ovl),
                r.scale.as_str().to_string(),
                format!("{:.6}", r.kw_h),
                format!("{:.6e}", r.kw_p),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}
