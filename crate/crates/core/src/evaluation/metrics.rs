use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary classification metrics for one positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    /// Set when precision, recall or F1 had a zero denominator and was reported as 0.
    pub degenerate: bool,
}

fn safe_div(num: f64, den: f64, flag: &mut bool) -> f64 {
    if den == 0.0 {
        *flag = true;
        0.0
    } else {
        num / den
    }
}

impl Metrics {
    pub fn from_counts(tp: usize, tn: usize, fp: usize, fn_: usize) -> Self {
        let mut degenerate = false;
        let total = (tp + tn + fp + fn_) as f64;
        let precision = safe_div(tp as f64, (tp + fp) as f64, &mut degenerate);
        let recall = safe_div(tp as f64, (tp + fn_) as f64, &mut degenerate);
        let f1 = safe_div(2.0 * precision * recall, precision + recall, &mut degenerate);
        Metrics {
            accuracy: if total > 0.0 { (tp + tn) as f64 / total } else { 0.0 },
            precision,
            recall,
            f1,
            tp,
            tn,
            fp,
            fn_,
            degenerate,
        }
    }
}

pub fn compute_metrics(y_true: &[usize], y_pred: &[usize], positive: usize) -> Result<Metrics> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            got: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::invalid("metrics need at least one prediction"));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t == positive, p == positive) {
            (true, true) => tp += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
        }
    }
    Ok(Metrics::from_counts(tp, tn, fp, fn_))
}
