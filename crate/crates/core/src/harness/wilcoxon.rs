//! One-sided Wilcoxon signed-rank test for paired samples.

use crate::error::{invalid, Result};
use crate::normal::cdf;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alternative {
    /// `a` tends to be smaller than `b`.
    Less,
    /// `a` tends to be larger than `b`.
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Sum of the ranks of the positive differences `a − b`.
    pub w_plus: f64,
    /// Pairs left after dropping zero differences.
    pub n_effective: usize,
    pub p_value: f64,
    pub method: Method,
    /// Every difference was zero; `p_value` is 1.
    pub degenerate: bool,
}

/// Largest effective sample size that uses the exact null distribution.
pub const EXACT_LIMIT: usize = 25;

/// Tests `a` against `b` pairwise. Zero differences are dropped and tied
/// magnitudes get midranks. Up to 25 remaining pairs the p-value comes from
/// the exact permutation distribution of the (mid)rank sum, beyond that from
/// the normal approximation with tie-corrected variance.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alternative: Alternative) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(invalid(format!("paired samples differ in length ({} vs {})", a.len(), b.len())));
    }
    if a.len() < 5 {
        return Err(invalid("the signed-rank test needs at least 5 pairs"));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(invalid("samples must be finite"));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult { w_plus: 0.0, n_effective: 0, p_value: 1.0, method: Method::Exact, degenerate: true });
    }

    // Doubled midranks keep everything in integers.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut rank2 = vec![0u64; n];
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && diffs[order[end]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // positions start+1..=end share the rank (start+1+end)/2
        for &i in &order[start..end] {
            rank2[i] = (start + 1 + end) as u64;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    let w2: u64 = (0..n).filter(|&i| diffs[i] > 0.0).map(|i| rank2[i]).sum();
    let w_plus = w2 as f64 / 2.0;

    let (p_value, method) = if n <= EXACT_LIMIT {
        let total: u64 = rank2.iter().sum();
        let mut counts = vec![0f64; total as usize + 1];
        counts[0] = 1.0;
        let mut reach = 0usize;
        for &r in &rank2 {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if counts[s] != 0.0 {
                    counts[s + r] += counts[s];
                }
            }
            reach += r;
        }
        let all = 2f64.powi(n as i32);
        let tail: f64 = match alternative {
            Alternative::Less => counts[..=w2 as usize].iter().sum(),
            Alternative::Greater => counts[w2 as usize..].iter().sum(),
        };
        ((tail / all).min(1.0), Method::Exact)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
        let z = (w_plus - mean) / var.sqrt();
        let p = match alternative {
            Alternative::Less => cdf(z),
            Alternative::Greater => cdf(-z),
        };
        (p, Method::Normal)
    };
    Ok(WilcoxonResult { w_plus, n_effective: n, p_value, method, degenerate: false })
}
