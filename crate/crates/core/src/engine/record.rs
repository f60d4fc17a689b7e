//! Serializable trace of one optimization run.

use super::select::SelectionReport;
use super::{Algorithm, SelectMode};
use crate::gp::GpHyperparameters;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Point in original problem units.
    pub x: Vec<f64>,
    pub y: f64,
}

/// Fully resolved settings of a run, including derived values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub iterations: usize,
    pub eta: f64,
    pub select_mode: SelectMode,
    pub n_init: usize,
    pub seed: u64,
}

/// DMEA bookkeeping for one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmeaStep {
    /// Quality indicator of each member of the previous batch.
    pub quality: Vec<u8>,
    /// Per-bank-member threshold; `None` when the threshold was opened up.
    pub thresholds: Vec<Option<f64>>,
    pub recent_penalty: Vec<f64>,
    pub cumulative_penalty: Vec<f64>,
    pub triple: [usize; 3],
    pub confidence: [f64; 3],
    pub pareto_size: usize,
    pub extremes: usize,
    pub selection: SelectionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub batch: Vec<Evaluation>,
    /// Batch points that duplicated the archive or each other and were replaced.
    pub replaced_duplicates: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gp: Option<GpHyperparameters>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dmea: Option<DmeaStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub config: RunConfig,
    pub initial: Vec<Evaluation>,
    pub iterations: Vec<IterationRecord>,
    /// Best value after the initial design, then after every iteration.
    pub incumbent_trace: Vec<f64>,
    pub best: Evaluation,
    /// Set when the run stopped early; the message says why.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aborted: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
}

impl RunRecord {
    pub(crate) fn start(config: RunConfig, initial: Vec<Evaluation>) -> Self {
        let best = initial
            .iter()
            .min_by(|a, b| a.y.total_cmp(&b.y))
            .cloned()
            .expect("non-empty initial design");
        Self {
            schema_version: SCHEMA_VERSION,
            config,
            incumbent_trace: vec![best.y],
            initial,
            iterations: Vec::new(),
            best,
            aborted: None,
            flags: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, iteration: IterationRecord) {
        for e in &iteration.batch {
            if e.y < self.best.y {
                self.best = e.clone();
            }
        }
        self.incumbent_trace.push(self.best.y);
        self.iterations.push(iteration);
    }

    pub fn best_value(&self) -> f64 {
        self.best.y
    }

    pub fn total_evaluations(&self) -> usize {
        self.initial.len() + self.iterations.iter().map(|i| i.batch.len()).sum::<usize>()
    }

    /// Every evaluated pair, initial design first.
    pub fn evaluations(&self) -> impl Iterator<Item = &Evaluation> {
        self.initial.iter().chain(self.iterations.iter().flat_map(|i| &i.batch))
    }

    /// `best-so-far − f*` after the initial design and after every iteration, floored at 0.
    pub fn regret_trace(&self, f_star: f64) -> Vec<f64> {
        self.incumbent_trace.iter().map(|b| (b - f_star).max(0.0)).collect()
    }

    pub fn final_regret(&self, f_star: f64) -> f64 {
        (self.best.y - f_star).max(0.0)
    }
}
