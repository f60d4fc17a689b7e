//! Scoring the candidate acquisitions against the last batch.

use serde::{Deserialize, Serialize};

/// Beaten by at most this many historical solutions still counts as high quality.
pub const QUALITY_RANK_LIMIT: usize = 3;

/// 1 if at most three historical values are strictly smaller than `value`.
pub fn quality_indicator(value: f64, historical: &[f64]) -> u8 {
    let beaten_by = historical.iter().filter(|h| **h < value).count();
    u8::from(beaten_by <= QUALITY_RANK_LIMIT)
}

/// 1 if the acquisition value reaches the threshold `g`.
pub fn recommendation_indicator(acq_value: f64, g: f64) -> u8 {
    u8::from(acq_value >= g)
}

/// One batch member as seen by the penalty: quality, recommendation, value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Judged {
    pub quality: u8,
    pub recommended: u8,
    pub value: f64,
}

/// `Σ |hq − φ|·|f − f*| + hq·φ·(f − f*)` over the batch.
///
/// Missing a good point or recommending a poor one costs the distance to the
/// historical best; recommending a good point adds `f − f*`, a reward when it
/// improves on `f*`.
pub fn recent_penalty(batch: &[Judged], f_star: f64) -> f64 {
    batch
        .iter()
        .map(|j| {
            let (hq, phi) = (f64::from(j.quality), f64::from(j.recommended));
            (hq - phi).abs() * (j.value - f_star).abs() + hq * phi * (j.value - f_star)
        })
        .sum()
}

/// Recent and cumulative penalties of every bank member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyLedger {
    pub recent: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub eta: f64,
}

impl PenaltyLedger {
    pub fn new(size: usize, eta: f64) -> Self {
        Self { recent: vec![0.0; size], cumulative: vec![0.0; size], eta }
    }

    /// `P_j ← η P_j + p_j`, and `recent` becomes `p`.
    pub fn update(&mut self, recent: &[f64]) {
        assert_eq!(recent.len(), self.cumulative.len(), "penalty vector length");
        for (c, p) in self.cumulative.iter_mut().zip(recent) {
            *c = self.eta * *c + p;
        }
        self.recent = recent.to_vec();
    }

    /// Ids of the three smallest cumulative penalties, ties to the lower id.
    pub fn select_triple(&self) -> [usize; 3] {
        assert!(self.cumulative.len() >= 3, "need at least three candidates");
        let mut ids: Vec<usize> = (0..self.cumulative.len()).collect();
        ids.sort_by(|&a, &b| self.cumulative[a].total_cmp(&self.cumulative[b]).then(a.cmp(&b)));
        [ids[0], ids[1], ids[2]]
    }

    pub fn confidence(&self, triple: [usize; 3]) -> ConfidenceVector {
        ConfidenceVector(triple.map(|id| self.cumulative[id]))
    }
}

/// Cumulative penalties of the selected triple, aligned with the MOP
/// objectives; smaller means more trusted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceVector(pub [f64; 3]);

impl ConfidenceVector {
    /// The more trusted objective of a pair, ties to the lower index.
    pub fn preferred(&self, u: usize, v: usize) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.0[b] < self.0[a] {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quality_boundaries() {
        assert_eq!(quality_indicator(0.5, &[1.0, 2.0, 3.0]), 1);
        assert_eq!(quality_indicator(5.0, &[1.0, 2.0, 3.0, 9.0]), 1);
        assert_eq!(quality_indicator(5.0, &[1.0, 2.0, 3.0, 4.0]), 0);
        // ties are not "better"
        assert_eq!(quality_indicator(1.0, &[1.0, 1.0, 1.0, 1.0, 1.0]), 1);
    }

    #[test]
    fn recommendation_boundaries() {
        assert_eq!(recommendation_indicator(0.7, 0.7), 1);
        assert_eq!(recommendation_indicator(0.7 - 1e-9, 0.7), 0);
        assert_eq!(recommendation_indicator(-1e300, f64::NEG_INFINITY), 1);
    }

    #[test]
    fn penalty_cases() {
        let r = recent_penalty(&[Judged { quality: 1, recommended: 1, value: 1.2 }], 1.5);
        assert!((r + 0.3).abs() < 1e-15);
        let m = recent_penalty(&[Judged { quality: 1, recommended: 0, value: 2.0 }], 1.5);
        assert!((m - 0.5).abs() < 1e-15);
        assert_eq!(recent_penalty(&[Judged { quality: 0, recommended: 0, value: 42.0 }], 1.5), 0.0);
        let fp = recent_penalty(&[Judged { quality: 0, recommended: 1, value: 1.0 }], 1.5);
        assert!((fp - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cumulative_updates() {
        let mut l = PenaltyLedger::new(7, 0.0);
        l.cumulative = vec![5.0; 7];
        let p = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        l.update(&p);
        assert_eq!(l.cumulative, p);
        assert_eq!(l.recent, p);

        let mut l = PenaltyLedger::new(3, 1.0);
        l.cumulative = vec![2.0; 3];
        l.update(&[3.0; 3]);
        assert_eq!(l.cumulative, vec![5.0; 3]);

        let mut l = PenaltyLedger::new(3, 0.5);
        l.cumulative = vec![4.0; 3];
        l.update(&[1.0; 3]);
        assert_eq!(l.cumulative, vec![3.0; 3]);
    }

    #[test]
    fn triple_selection() {
        let mut l = PenaltyLedger::new(7, 0.0);
        l.cumulative = vec![3.0, 1.0, 2.0, 9.0, 9.0, 9.0, 9.0];
        assert_eq!(l.select_triple(), [1, 2, 0]);
        l.cumulative = vec![4.0; 7];
        assert_eq!(l.select_triple(), [0, 1, 2]);
        l.cumulative = vec![0.0, 0.0, 5.0, 0.0, 9.0, 9.0, 9.0];
        assert_eq!(l.select_triple(), [0, 1, 3]);
    }

    #[test]
    fn confidence_preference() {
        let t = ConfidenceVector([1.0, 2.0, 3.0]);
        assert_eq!(t.preferred(0, 1), 0);
        assert_eq!(t.preferred(2, 1), 1);
        let tie = ConfidenceVector([2.0, 2.0, 1.0]);
        assert_eq!(tie.preferred(0, 1), 0);
        assert_eq!(tie.preferred(1, 2), 2);
    }
}
