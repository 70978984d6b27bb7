//! Gaussian kernel density estimation and the overlapping coefficient.

use serde::{Deserialize, Serialize};

use super::special::normal_pdf;
use crate::error::{Error, Result};

/// Grid resolution for overlap integration.
pub const DEFAULT_GRID_POINTS: usize = 2048;

/// Support extension on each side, in bandwidths.
pub const SUPPORT_BANDWIDTHS: f64 = 4.0;

/// Overlap grid extension on each side, in bandwidths. Wider than the support
/// so the truncated Gaussian tail mass stays below 1e-8.
pub const OVL_BANDWIDTHS: f64 = 6.0;

/// A univariate density that can be evaluated pointwise.
pub trait Density {
    fn pdf(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Density for F {
    fn pdf(&self, x: f64) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    sample: Vec<f64>,
    bandwidth: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile of sorted data (`q` in [0, 1]).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule: `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`.
///
/// When the IQR is zero but the sample is not constant, the standard deviation
/// is used alone. A constant sample gets `max(1e-3, 1e-3 * |mean|)`.
pub fn silverman_bandwidth(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let sd = std_dev(&sorted);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let mut spread = sd.min(iqr / 1.34);
    if spread <= 0.0 {
        spread = sd;
    }
    if spread <= 0.0 {
        return (1e-3 * mean(sample).abs()).max(1e-3);
    }
    0.9 * spread * (sample.len() as f64).powf(-0.2)
}

/// Fits a Gaussian KDE with Silverman's bandwidth.
pub fn kde_fit(sample: &[f64]) -> Result<DensityEstimate> {
    if sample.len() < 2 {
        return Err(Error::invalid("kde needs at least two sample points"));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("kde sample contains non-finite values"));
    }
    DensityEstimate::with_bandwidth(sample.to_vec(), silverman_bandwidth(sample))
}

impl DensityEstimate {
    pub fn with_bandwidth(sample: Vec<f64>, bandwidth: f64) -> Result<Self> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::invalid(format!("bandwidth must be positive, got {bandwidth}")));
        }
        if sample.is_empty() {
            return Err(Error::invalid("empty kde sample"));
        }
        Ok(DensityEstimate { sample, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn sample(&self) -> &[f64] {
        &self.sample
    }

    /// `(1 / (n h)) * sum K((x - x_i) / h)` with a standard normal kernel.
    pub fn evaluate(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        self.sample
            .iter()
            .map(|&xi| normal_pdf((x - xi) / h))
            .sum::<f64>()
            / (self.sample.len() as f64 * h)
    }

    /// `[min - 4h, max + 4h]`.
    pub fn support(&self) -> (f64, f64) {
        self.extended_range(SUPPORT_BANDWIDTHS)
    }

    /// `[min - k h, max + k h]`.
    pub fn extended_range(&self, k: f64) -> (f64, f64) {
        let (lo, hi) = self
            .sample
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let pad = k * self.bandwidth;
        (lo - pad, hi + pad)
    }
}

impl Density for DensityEstimate {
    fn pdf(&self, x: f64) -> f64 {
        self.evaluate(x)
    }
}

/// Uniform grid of `n` points over `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
}

/// Trapezoid rule over `f` sampled on a uniform grid.
pub fn trapezoid(ys: &[f64], lo: f64, hi: f64) -> f64 {
    if ys.len() < 2 {
        return 0.0;
    }
    let step = (hi - lo) / (ys.len() - 1) as f64;
    let inner: f64 = ys[1..ys.len() - 1].iter().sum();
    step * (inner + 0.5 * (ys[0] + ys[ys.len() - 1]))
}

/// Integral of the density over `[lo, hi]` with `n` trapezoid points.
pub fn integrate<D: Density + ?Sized>(d: &D, lo: f64, hi: f64, n: usize) -> f64 {
    let ys: Vec<f64> = grid(lo, hi, n).into_iter().map(|x| d.pdf(x)).collect();
    trapezoid(&ys, lo, hi)
}

/// Overlap level of two class densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapScale {
    Medium,
    High,
    VeryHigh,
}

impl OverlapScale {
    pub const HIGH_FROM: f64 = 0.70;
    pub const VERY_HIGH_FROM: f64 = 0.83;

    pub fn of(value: f64) -> Self {
        if value >= Self::VERY_HIGH_FROM {
            OverlapScale::VeryHigh
        } else if value >= Self::HIGH_FROM {
            OverlapScale::High
        } else {
            OverlapScale::Medium
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OverlapScale::Medium => "Medium",
            OverlapScale::High => "High",
            OverlapScale::VeryHigh => "Very High",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvlResult {
    pub value: f64,
    pub grid_points: usize,
    pub feature_name: String,
    pub scale: OverlapScale,
}

impl OvlResult {
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.feature_name = name.into();
        self
    }
}

/// Integral of `min(f, g)` over `[lo, hi]` by the trapezoid rule, clamped to [0, 1].
pub fn ovl_on_grid<F, G>(f: &F, g: &G, lo: f64, hi: f64, n: usize) -> f64
where
    F: Density + ?Sized,
    G: Density + ?Sized,
{
    let ys: Vec<f64> = grid(lo, hi, n)
        .into_iter()
        .map(|x| f.pdf(x).min(g.pdf(x)))
        .collect();
    trapezoid(&ys, lo, hi).clamp(0.0, 1.0)
}

pub fn ovl(p: &DensityEstimate, q: &DensityEstimate) -> OvlResult {
    ovl_with_grid(p, q, DEFAULT_GRID_POINTS)
}

/// Overlap on the union of both sample ranges, extended by [`OVL_BANDWIDTHS`].
pub fn ovl_with_grid(p: &DensityEstimate, q: &DensityEstimate, n: usize) -> OvlResult {
    let (plo, phi) = p.extended_range(OVL_BANDWIDTHS);
    let (qlo, qhi) = q.extended_range(OVL_BANDWIDTHS);
    let value = ovl_on_grid(p, q, plo.min(qlo), phi.max(qhi), n);
    OvlResult {
        value,
        grid_points: n,
        feature_name: String::new(),
        scale: OverlapScale::of(value),
    }
}
