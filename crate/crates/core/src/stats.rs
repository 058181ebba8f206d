//! Small numeric helpers shared across the analysis modules: means,
//! standard errors, Pearson correlation and nearest-rank quantiles.
//!
//! Quantile conventions are load-bearing for the hit-flag and binning rules,
//! so they live in one place: `nearest_rank(sorted, q)` is the value at rank
//! `ceil(q * n)` (1-indexed), and all tie handling is "ties share the lower
//! bin".

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than 2 points.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Standard error of the mean.
pub fn standard_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    sample_std(xs) / (xs.len() as f64).sqrt()
}

/// Pearson correlation coefficient over paired samples.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(format!(
            "pearson over {} vs {} samples",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::TooFewSharedPairs(xs.len()));
    }
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DimensionMismatch(
            "pearson undefined for a constant series".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// 1-indexed nearest rank `ceil(q * n)`, clamped to `1..=n`. The epsilon
/// guards against products like 0.55 * 100 landing just above the integer.
pub fn rank_of(q: f64, n: usize) -> usize {
    let rank = (q * n as f64 - 1e-9).ceil() as usize;
    rank.clamp(1, n)
}

/// Nearest-rank quantile: the value at rank `ceil(q * n)` (1-indexed) of an
/// ascending-sorted slice, clamped to the valid range.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    sorted[rank_of(q, sorted.len()) - 1]
}

/// Sort a copy ascending (total order; inputs are finite by construction).
pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Assign each value a 1-based quantile bin given cut fractions.
///
/// Thresholds are nearest-rank values at the cuts; an element lands in the
/// lowest bin whose threshold is >= its value, so ties share the lower bin.
pub fn quantile_bins(values: &[f64], cuts: &[f64]) -> Result<Vec<usize>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("quantile binning over no subjects"));
    }
    if values.len() < cuts.len() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} subjects cannot fill {} quantile bins",
            values.len(),
            cuts.len() + 1
        )));
    }
    let s = sorted(values);
    let thresholds: Vec<f64> = cuts.iter().map(|&q| nearest_rank(&s, q)).collect();
    Ok(values
        .iter()
        .map(|&v| 1 + thresholds.iter().filter(|&&t| v > t).count())
        .collect())
}

/// Median by nearest rank (lower-middle for even counts).
pub fn median(xs: &[f64]) -> f64 {
    nearest_rank(&sorted(xs), 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank_picks_ceil_rank() {
        let s: Vec<f64> = (1..=20).map(f64::from).collect();
        assert_eq!(nearest_rank(&s, 0.95), 19.0);
        assert_eq!(nearest_rank(&s, 0.5), 10.0);
        assert_eq!(nearest_rank(&s, 1.0), 20.0);
        assert_eq!(nearest_rank(&s, 0.0), 1.0);
    }

    #[test]
    fn quintiles_split_distinct_values_evenly() {
        let values: Vec<f64> = (0..100).map(f64::from).collect();
        let bins = quantile_bins(&values, &[0.2, 0.4, 0.6, 0.8]).unwrap();
        for b in 1..=5 {
            assert_eq!(bins.iter().filter(|&&x| x == b).count(), 20, "bin {b}");
        }
    }

    #[test]
    fn all_equal_values_share_bin_one() {
        let values = vec![3.0; 12];
        let bins = quantile_bins(&values, &[0.2, 0.4, 0.6, 0.8]).unwrap();
        assert!(bins.iter().all(|&b| b == 1));
    }

    #[test]
    fn pearson_on_linear_series() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [2.0, 4.0, 6.0, 8.0];
        let neg: Vec<f64> = ys.iter().map(|y| -y).collect();
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }
}
