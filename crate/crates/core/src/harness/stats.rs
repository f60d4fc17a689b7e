//! Summary statistics of final regrets.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (divisor `n − 1`); 0 for a single value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// `None` for an empty slice.
pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(Summary {
        n,
        mean,
        median: median(values),
        std,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Median; the mean of the two middle values for even lengths. NaN if empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let s = summarize(&[0.25]).unwrap();
        assert_eq!((s.mean, s.median, s.std), (0.25, 0.25, 0.0));
    }

    #[test]
    fn twenty_known_values() {
        // 1..=20: mean 10.5, median 10.5, sample variance 35
        let v: Vec<f64> = (1..=20).rev().map(f64::from).collect();
        let s = summarize(&v).unwrap();
        assert!((s.mean - 10.5).abs() < 1e-12);
        assert!((s.median - 10.5).abs() < 1e-12);
        assert!((s.std - 35f64.sqrt()).abs() < 1e-12);
        assert_eq!((s.min, s.max), (1.0, 20.0));
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert!(summarize(&[]).is_none());
    }
}
