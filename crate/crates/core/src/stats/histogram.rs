//! Per-class histograms with KDE overlays, for external plotting.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::kde::{kde_fit, DensityEstimate};
use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub density_fake: f64,
    pub density_real: f64,
    pub kde_fake: f64,
    pub kde_real: f64,
}

/// Density-normalized counts over equal-width bins; the last bin is closed.
pub fn density_histogram(sample: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in sample {
        let b = (((x - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let norm = sample.len() as f64 * width;
    counts
        .into_iter()
        .map(|c| if norm > 0.0 { c as f64 / norm } else { 0.0 })
        .collect()
}

fn kde_or_none(sample: &[f64]) -> Option<DensityEstimate> {
    kde_fit(sample).ok()
}

/// Shared bins over both classes' pooled range. A constant pooled range is
/// widened to `[v - 0.5, v + 0.5]`.
pub fn class_histogram(fake: &[f64], real: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let pooled = fake.iter().chain(real);
    let (mut lo, mut hi) = pooled.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    if !lo.is_finite() {
        return Err(Error::invalid("histogram of an empty sample"));
    }
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let df = density_histogram(fake, lo, hi, bins);
    let dr = density_histogram(real, lo, hi, bins);
    let kf = kde_or_none(fake);
    let kr = kde_or_none(real);
    Ok((0..bins)
        .map(|b| {
            let left = lo + width * b as f64;
            let right = if b == bins - 1 { hi } else { lo + width * (b + 1) as f64 };
            let mid = 0.5 * (left + right);
            HistogramBin {
                bin_left: left,
                bin_right: right,
                density_fake: df[b],
                density_real: dr[b],
                kde_fake: kf.as_ref().map_or(0.0, |k| k.evaluate(mid)),
                kde_real: kr.as_ref().map_or(0.0, |k| k.evaluate(mid)),
            }
        })
        .collect())
}

/// Values are written with round-trip precision.
pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["bin_left", "bin_right", "density_fake", "density_real", "kde_fake", "kde_real"])?;
    for b in bins {
        wtr.write_record(
            [b.bin_left, b.bin_right, b.density_fake, b.density_real, b.kde_fake, b.kde_real]
                .iter()
                .map(|v| v.to_string()),
        )?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}
