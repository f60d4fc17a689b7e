//! Picking the batch out of the Pareto set: extremes first, then the
//! layered preferred selection (or a uniform draw for the ablation).

use super::penalty::ConfidenceVector;
use crate::domain::random_unit_point;
use crate::nsga2::{distance, Objectives, ParetoResult};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Members minimizing a single objective, deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    /// Indices into the Pareto set, in objective order.
    pub indices: Vec<usize>,
    pub points: Vec<Vec<f64>>,
}

impl Extremes {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Argmin of every objective (lowest index on ties), with genomes closer
/// than 1e-9 counted once.
pub fn extreme_solutions(result: &ParetoResult) -> Extremes {
    assert!(!result.is_empty(), "empty Pareto set");
    let mut indices: Vec<usize> = Vec::with_capacity(3);
    for m in 0..3 {
        let mut best = 0;
        for (i, f) in result.pf.iter().enumerate() {
            if f[m] < result.pf[best][m] {
                best = i;
            }
        }
        if !indices.iter().any(|&j| distance(&result.ps[j], &result.ps[best]) < 1e-9) {
            indices.push(best);
        }
    }
    let points = indices.iter().map(|&i| result.ps[i].clone()).collect();
    Extremes { indices, points }
}

/// Per-objective thresholds: the `⌊s/5⌋`-th smallest value over the `s`
/// members (rank clamped to at least 1).
pub fn objective_thresholds(pf: &[Objectives]) -> [f64; 3] {
    let rank = (pf.len() / 5).max(1);
    let mut out = [0.0; 3];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut col: Vec<f64> = pf.iter().map(|f| f[m]).collect();
        col.sort_by(f64::total_cmp);
        *slot = col[rank - 1];
    }
    out
}

/// Confident level of one objective vector: over the three objective pairs,
/// count the pairs whose more trusted objective is at or below its threshold.
pub fn confident_level(f: &Objectives, thresholds: &[f64; 3], t: &ConfidenceVector) -> u8 {
    [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .map(|(u, v)| t.preferred(u, v))
        .filter(|&w| f[w] <= thresholds[w])
        .count() as u8
}

/// What the preferred selection did, for the run record.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Candidate counts in layers with confident level 0, 1, 2, 3.
    pub layer_sizes: [usize; 4],
    /// Confident level of the first and second non-empty layers, scanning down from 3.
    pub primary_layer: Option<u8>,
    pub secondary_layer: Option<u8>,
    pub from_primary: usize,
    pub from_secondary: usize,
    /// Points taken from lower layers or leftovers because the top two ran short.
    pub from_fallback: usize,
    /// Uniform-random cube points added because the pool ran dry.
    pub padded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub points: Vec<Vec<f64>>,
    pub report: SelectionReport,
}

/// Layered selection of `need` points from the Pareto members not in `excluded`.
///
/// Thresholds come from the whole set. Candidates are grouped by confident
/// level; `⌈2/3·need⌉` are drawn from the highest non-empty layer and the
/// rest from the next one. Shortfalls move down the remaining layers, then to
/// unused members of the top layer, then to random cube points.
pub fn preferred_select<R: Rng + ?Sized>(
    result: &ParetoResult,
    excluded: &[usize],
    t: &ConfidenceVector,
    need: usize,
    rng: &mut R,
) -> Selection {
    let dim = result.ps.first().map_or(0, Vec::len);
    let thresholds = objective_thresholds(&result.pf);
    let mut layers: [Vec<usize>; 4] = Default::default();
    for (i, f) in result.pf.iter().enumerate() {
        if !excluded.contains(&i) {
            layers[confident_level(f, &thresholds, t) as usize].push(i);
        }
    }
    let mut report = SelectionReport { layer_sizes: layers.each_ref().map(Vec::len), ..Default::default() };
    let nonempty: Vec<usize> = (0..4).rev().filter(|&c| !layers[c].is_empty()).collect();

    let mut picked: Vec<usize> = Vec::with_capacity(need);
    let mut used = vec![false; result.len()];
    let draw = |layer: &[usize], count: usize, used: &mut Vec<bool>, picked: &mut Vec<usize>, rng: &mut R| {
        let avail: Vec<usize> = layer.iter().copied().filter(|&i| !used[i]).collect();
        let take = count.min(avail.len());
        for j in sample(rng, avail.len(), take) {
            used[avail[j]] = true;
            picked.push(avail[j]);
        }
        take
    };

    let quota = (2 * need).div_ceil(3);
    if let Some(&c1) = nonempty.first() {
        report.primary_layer = Some(c1 as u8);
        report.from_primary = draw(&layers[c1], quota, &mut used, &mut picked, rng);
    }
    if let Some(&c2) = nonempty.get(1) {
        report.secondary_layer = Some(c2 as u8);
        let want = need - picked.len();
        report.from_secondary = draw(&layers[c2], want, &mut used, &mut picked, rng);
    }
    for &c in nonempty.iter().skip(2).chain(nonempty.first()) {
        let want = need - picked.len();
        if want == 0 {
            break;
        }
        report.from_fallback += draw(&layers[c], want, &mut used, &mut picked, rng);
    }

    let mut points: Vec<Vec<f64>> = picked.iter().map(|&i| result.ps[i].clone()).collect();
    while points.len() < need {
        points.push(random_unit_point(dim, rng));
        report.padded += 1;
    }
    Selection { points, report }
}

/// Uniform draw of `need` members not in `excluded`, padded with random cube points.
pub fn random_select<R: Rng + ?Sized>(result: &ParetoResult, excluded: &[usize], need: usize, rng: &mut R) -> Selection {
    let dim = result.ps.first().map_or(0, Vec::len);
    let pool: Vec<usize> = (0..result.len()).filter(|i| !excluded.contains(i)).collect();
    let take = need.min(pool.len());
    let mut points: Vec<Vec<f64>> = sample(rng, pool.len(), take).into_iter().map(|j| result.ps[pool[j]].clone()).collect();
    let mut report = SelectionReport { from_primary: take, ..Default::default() };
    while points.len() < need {
        points.push(random_unit_point(dim, rng));
        report.padded += 1;
    }
    Selection { points, report }
}
