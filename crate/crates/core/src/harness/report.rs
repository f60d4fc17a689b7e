//! Grouped regret tables and convergence curves.

use super::stats::{median, summarize, Summary};
use crate::engine::{Algorithm, RunRecord, SelectMode};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Final-regret statistics of one (problem, algorithm, k, η, select mode) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub eta: f64,
    pub select_mode: SelectMode,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub problem: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub eta: f64,
    pub select_mode: SelectMode,
    pub iteration: usize,
    pub mean_regret: f64,
    pub median_regret: f64,
    pub runs: usize,
}

type Key = (String, String, usize, u64, String);

fn key(r: &RunRecord) -> Key {
    let c = &r.config;
    (c.problem.clone(), c.algorithm.to_string(), c.k, c.eta.to_bits(), c.select_mode.to_string())
}

fn grouped<'a>(records: &'a [RunRecord]) -> BTreeMap<Key, Vec<&'a RunRecord>> {
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(key(r)).or_default().push(r);
    }
    groups
}

/// One row per configuration cell. `f_star` maps a problem name to its optimum.
pub fn aggregate(records: &[RunRecord], f_star: impl Fn(&str) -> Result<f64>) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(invalid("no records to aggregate"));
    }
    grouped(records)
        .into_values()
        .map(|runs| {
            let c = &runs[0].config;
            let fs = f_star(&c.problem)?;
            let finals: Vec<f64> = runs.iter().map(|r| r.final_regret(fs)).collect();
            Ok(SummaryRow {
                problem: c.problem.clone(),
                algorithm: c.algorithm,
                k: c.k,
                eta: c.eta,
                select_mode: c.select_mode,
                summary: summarize(&finals).expect("non-empty group"),
            })
        })
        .collect()
}

/// Mean and median regret after the initial design (iteration 0) and after
/// every iteration, per configuration cell. Runs that stopped early keep
/// their last value.
pub fn convergence(records: &[RunRecord], f_star: impl Fn(&str) -> Result<f64>) -> Result<Vec<ConvergencePoint>> {
    let mut out = Vec::new();
    for runs in grouped(records).into_values() {
        let c = &runs[0].config;
        let fs = f_star(&c.problem)?;
        let traces: Vec<Vec<f64>> = runs.iter().map(|r| r.regret_trace(fs)).collect();
        let len = traces.iter().map(Vec::len).max().unwrap_or(0);
        for it in 0..len {
            let at: Vec<f64> = traces.iter().map(|t| t[it.min(t.len() - 1)]).collect();
            out.push(ConvergencePoint {
                problem: c.problem.clone(),
                algorithm: c.algorithm,
                k: c.k,
                eta: c.eta,
                select_mode: c.select_mode,
                iteration: it,
                mean_regret: at.iter().sum::<f64>() / at.len() as f64,
                median_regret: median(&at),
                runs: at.len(),
            });
        }
    }
    Ok(out)
}
