//! On-disk layout: one JSON file per run, a flat results CSV, and the
//! resolved experiment config.

use super::ResolvedConfig;
use crate::engine::{Algorithm, RunRecord, SelectMode, SCHEMA_VERSION};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub const RESULTS_FILE: &str = "results.csv";
pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub problem: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub eta: f64,
    pub select_mode: SelectMode,
    pub seed: u64,
    pub final_regret: f64,
    /// Seconds.
    pub wall_time: f64,
}

impl ResultRow {
    pub fn new(record: &RunRecord, f_star: f64, wall_time: f64) -> Self {
        let c = &record.config;
        Self {
            problem: c.problem.clone(),
            algorithm: c.algorithm,
            k: c.k,
            eta: c.eta,
            select_mode: c.select_mode,
            seed: c.seed,
            final_regret: record.final_regret(f_star),
            wall_time,
        }
    }
}

pub fn record_file_name(record: &RunRecord) -> String {
    let c = &record.config;
    format!(
        "{}_{}_k{}_eta{}_{}_seed{}.json",
        c.problem.to_lowercase(),
        c.algorithm,
        c.k,
        c.eta,
        c.select_mode,
        c.seed
    )
}

pub fn write_record(dir: &Path, record: &RunRecord) -> Result<PathBuf> {
    let path = dir.join(record_file_name(record));
    fs::write(&path, serde_json::to_string_pretty(record)?)?;
    Ok(path)
}

pub fn read_record(path: &Path) -> Result<RunRecord> {
    let record: RunRecord = serde_json::from_str(&fs::read_to_string(path)?)?;
    if record.schema_version != SCHEMA_VERSION {
        return Err(invalid(format!(
            "{} has schema version {}, expected {SCHEMA_VERSION}",
            path.display(),
            record.schema_version
        )));
    }
    Ok(record)
}

/// Every run record in `dir`, sorted by file name.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json") && p.file_name().is_some_and(|n| n != CONFIG_FILE));
    paths.sort();
    paths.iter().map(|p| read_record(p)).collect()
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub(crate) fn write_config(dir: &Path, config: &ResolvedConfig) -> Result<()> {
    fs::write(dir.join(CONFIG_FILE), serde_json::to_string_pretty(config)?)?;
    Ok(())
}
