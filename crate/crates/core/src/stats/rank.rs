//! Rank-based tests: Kruskal-Wallis and Spearman correlation.

use serde::{Deserialize, Serialize};

use super::special::{chi2_sf, student_t_two_sided};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub test_name: String,
}

/// Mid-ranks (1-based, ties get the average rank) and the sizes of tie groups.
pub fn midranks(xs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; xs.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // positions i..j share ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Kruskal-Wallis H with tie correction over any number of groups.
pub fn kruskal_wallis_groups(groups: &[&[f64]]) -> Result<TestResult> {
    if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) {
        return Err(Error::invalid("kruskal-wallis needs at least two non-empty groups"));
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = pooled.len();
    if n < 3 {
        return Err(Error::invalid("kruskal-wallis needs at least three observations"));
    }
    let (ranks, ties) = midranks(&pooled);
    let nf = n as f64;
    let correction = 1.0 - ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (nf * nf * nf - nf);
    let name = "kruskal-wallis".to_string();
    if correction <= 0.0 {
        // every value identical
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            test_name: name,
        });
    }
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = ((12.0 / (nf * (nf + 1.0)) * sum - 3.0 * (nf + 1.0)) / correction).max(0.0);
    Ok(TestResult {
        statistic: h,
        p_value: chi2_sf(h, (groups.len() - 1) as f64),
        test_name: name,
    })
}

pub fn kruskal_wallis(group_a: &[f64], group_b: &[f64]) -> Result<TestResult> {
    kruskal_wallis_groups(&[group_a, group_b])
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
    }
}

/// Spearman's rho (Pearson correlation of mid-ranks) with a two-sided
/// t-approximation p-value on n - 2 degrees of freedom.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::invalid("spearman needs at least three pairs"));
    }
    let (rx, _) = midranks(x);
    let (ry, _) = midranks(y);
    let rho = pearson(&rx, &ry).ok_or(Error::ConstantInput)?;
    let df = (x.len() - 2) as f64;
    let p_value = if rho.abs() >= 1.0 {
        0.0
    } else {
        student_t_two_sided(rho * (df / (1.0 - rho * rho)).sqrt(), df)
    };
    Ok(TestResult {
        statistic: rho,
        p_value,
        test_name: "spearman".into(),
    })
}

/// Pairwise Spearman rho between the given columns.
///
/// Constant columns get 0 off the diagonal; the diagonal is always 1.
pub fn spearman_columns(columns: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = columns.len();
    if let Some(c) = columns.first() {
        if c.len() < 3 {
            return Err(Error::invalid("spearman matrix needs at least three rows"));
        }
    }
    let ranks: Vec<Vec<f64>> = columns.iter().map(|c| midranks(c).0).collect();
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        m[i][i] = 1.0;
        for j in i + 1..d {
            let rho = pearson(&ranks[i], &ranks[j]).unwrap_or(0.0);
            m[i][j] = rho;
            m[j][i] = rho;
        }
    }
    for (i, r) in ranks.iter().enumerate() {
        if r.iter().all(|&v| v == r[0]) {
            log::warn!("column {i} is constant; its correlations are reported as 0");
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_with_ties() {
        let (r, ties) = midranks(&[10.0, 20.0, 10.0, 30.0]);
        assert_eq!(r, vec![1.5, 3.0, 1.5, 4.0]);
        assert_eq!(ties, vec![2]);
    }

    #[test]
    fn kw_identical_groups() {
        let r = kruskal_wallis(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kw_all_equal_is_not_an_error() {
        let r = kruskal_wallis(&[4.0, 4.0], &[4.0, 4.0]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn kw_input_validation() {
        assert!(kruskal_wallis(&[], &[1.0, 2.0, 3.0]).is_err());
        assert!(kruskal_wallis(&[1.0], &[2.0]).is_err());
    }

    #[test]
    fn spearman_basic() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(spearman(&x, &x).unwrap().statistic, 1.0);
        let rev = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert_eq!(spearman(&x, &rev).unwrap().statistic, -1.0);
        assert!(matches!(spearman(&x, &[1.0; 5]), Err(Error::ConstantInput)));
        assert!(spearman(&x[..2], &x[..2]).is_err());
    }
}
