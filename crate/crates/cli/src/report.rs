//! Consolidated summary of the stats, selection and evaluation artifacts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use cuelens::evaluation::{ClassifierSummary, EvalGrid};
use cuelens::selection::{SelectionReport, SelectionRow};
use cuelens::stats::{FeatureStats, TestResult};

use crate::commands::StatsFile;

/// Significance level for calling a Kruskal-Wallis result significant.
pub const KW_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyFeatures {
    pub rf_top3: Vec<String>,
    pub rfe_f3: Vec<String>,
    pub kw_alpha: f64,
    pub kw_significant: Vec<String>,
    /// Features in all three lists, in importance order.
    pub intersection: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCell {
    pub classifier: String,
    pub n_features: usize,
    pub accuracy: f64,
    pub f1: f64,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub kfolds: usize,
    pub n_fake: usize,
    pub n_real: usize,
    pub ovl_table: Vec<FeatureStats>,
    pub selection_table: Vec<SelectionRow>,
    pub rho_importance_ovl: Option<TestResult>,
    pub rho_importance_ovl_dense: Option<TestResult>,
    pub excluded_sparse: Vec<String>,
    pub classification: Vec<ClassifierSummary>,
    pub best: Option<BestCell>,
    pub key_features: KeyFeatures,
}

pub fn key_features(stats: &[FeatureStats], selection: &SelectionReport) -> KeyFeatures {
    let by_importance = selection.by_importance();
    let rf_top3: Vec<String> = by_importance.iter().take(3).map(|r| r.feature.clone()).collect();
    let rfe_f3 = selection.rfe.set(3).to_vec();
    let kw_significant: Vec<String> = stats
        .iter()
        .filter(|s| s.kw_p < KW_ALPHA)
        .map(|s| s.feature.clone())
        .collect();
    let intersection = rf_top3
        .iter()
        .filter(|f| rfe_f3.contains(f) && kw_significant.contains(f))
        .cloned()
        .collect();
    KeyFeatures {
        rf_top3,
        rfe_f3,
        kw_alpha: KW_ALPHA,
        kw_significant,
        intersection,
    }
}

pub fn build(stats: &StatsFile, selection: &SelectionReport, grid: &EvalGrid) -> Report {
    let best = grid
        .cells
        .iter()
        .fold(None, |best: Option<&cuelens::evaluation::EvalCell>, c| match best {
            Some(b) if b.accuracy >= c.accuracy => Some(b),
            _ => Some(c),
        })
        .map(|c| BestCell {
            classifier: c.classifier.display_name().to_string(),
            n_features: c.n_features,
            accuracy: c.accuracy,
            f1: c.f1,
            features: c.features.clone(),
        });
    Report {
        seed: grid.seed,
        kfolds: grid.k,
        n_fake: stats.n_fake,
        n_real: stats.n_real,
        ovl_table: stats.features.clone(),
        selection_table: selection.by_importance().into_iter().cloned().collect(),
        rho_importance_ovl: selection.rho_importance_ovl.clone(),
        rho_importance_ovl_dense: selection.rho_importance_ovl_dense.clone(),
        excluded_sparse: selection.excluded_sparse.clone(),
        classification: grid.summaries.clone(),
        best,
        key_features: key_features(&stats.features, selection),
    }
}

fn rho_line(t: &Option<TestResult>) -> String {
    match t {
        Some(t) => format!("{:.4} (p = {:.3e})", t.statistic, t.p_value),
        None => "not available".to_string(),
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

pub fn render_markdown(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Fake review cue analysis\n");
    let _ = writeln!(
        s,
        "{} reviews ({} fake, {} real). Seed {}, {}-fold cross-validation.\n",
        r.n_fake + r.n_real,
        r.n_fake,
        r.n_real,
        r.seed,
        r.kfolds
    );

    let _ = writeln!(s, "## Class overlap (ascending OVL)\n");
    let _ = writeln!(s, "| Feature | OVL | Scale | KW H | KW p |");
    let _ = writeln!(s, "|---|---:|---|---:|---:|");
    for f in &r.ovl_table {
        let _ = writeln!(
            s,
            "| {} | {:.4} | {} | {:.4} | {:.3e} |",
            f.feature,
            f.ovl,
            f.scale.as_str(),
            f.kw_h,
            f.kw_p
        );
    }

    let _ = writeln!(s, "\n## Feature selection\n");
    let _ = writeln!(s, "| Feature | RF importance | RFE iteration | Boruta hits | Boruta zone |");
    let _ = writeln!(s, "|---|---:|---:|---:|---|");
    for row in &r.selection_table {
        let _ = writeln!(
            s,
            "| {} | {:.4} | {} | {} | {} |",
            row.feature,
            row.rf_importance,
            row.rfe_first_iteration,
            row.boruta_hits,
            row.boruta_zone.as_str()
        );
    }

    let _ = writeln!(s, "\n## Importance against overlap\n");
    let _ = writeln!(s, "- Spearman rho, all features: {}", rho_line(&r.rho_importance_ovl));
    let _ = writeln!(
        s,
        "- Spearman rho, without {}: {}",
        list(&r.excluded_sparse),
        rho_line(&r.rho_importance_ovl_dense)
    );

    let _ = writeln!(s, "\n## Classification\n");
    let _ = writeln!(s, "| Classifier | Max accuracy | # features | Max F1 | # features | Mean accuracy | Mean F1 |");
    let _ = writeln!(s, "|---|---:|---:|---:|---:|---:|---:|");
    for c in &r.classification {
        let _ = writeln!(
            s,
            "| {} | {:.4} | {} | {:.4} | {} | {:.4} | {:.4} |",
            c.classifier.display_name(),
            c.max_accuracy,
            c.accuracy_n_features,
            c.max_f1,
            c.f1_n_features,
            c.mean_accuracy,
            c.mean_f1
        );
    }
    if let Some(b) = &r.best {
        let _ = writeln!(
            s,
            "\nBest: {} with {} features ({}), accuracy {:.4}, F1 {:.4}.",
            b.classifier,
            b.n_features,
            b.features.join(", "),
            b.accuracy,
            b.f1
        );
    }

    let k = &r.key_features;
    let _ = writeln!(s, "\n## Key features\n");
    let _ = writeln!(s, "- Top 3 by RF importance: {}", list(&k.rf_top3));
    let _ = writeln!(s, "- RFE subset of size 3: {}", list(&k.rfe_f3));
    let _ = writeln!(s, "- Kruskal-Wallis p < {}: {}", k.kw_alpha, list(&k.kw_significant));
    let _ = writeln!(s, "- In all three: {}", list(&k.intersection));
    s
}
