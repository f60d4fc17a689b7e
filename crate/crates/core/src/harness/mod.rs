//! Repeated runs, persistence, statistics and significance tests.

mod persist;
mod report;
mod stats;
mod wilcoxon;

pub use persist::{
    read_csv, read_record, read_records, record_file_name, write_csv, write_record, ResultRow, CONFIG_FILE,
    RESULTS_FILE,
};
pub use report::{aggregate, convergence, ConvergencePoint, SummaryRow};
pub use stats::{median, summarize, Summary};
pub use wilcoxon::{wilcoxon_signed_rank, Alternative, Method, WilcoxonResult, EXACT_LIMIT};

use crate::benchmarks::Benchmark;
use crate::engine::{run_dmea, run_ei_lp, run_random_search, Algorithm, DmeaConfig, EngineOptions, RunRecord, SelectMode};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

/// Default η grid of the sweep.
pub const ETA_GRID: [f64; 4] = [0.0, 0.05, 0.5, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub iterations: usize,
    pub eta: f64,
    pub select_mode: SelectMode,
    pub repetitions: usize,
    pub base_seed: u64,
    /// Overrides the `11·d − 1` initial design size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_init: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Benchmark::Branin.name().to_string(),
            algorithm: Algorithm::Dmea,
            k: 4,
            iterations: 45,
            eta: 0.0,
            select_mode: SelectMode::Preferred,
            repetitions: 20,
            base_seed: 0,
            n_init: None,
        }
    }
}

/// An [`ExperimentConfig`] with every derived value spelled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    #[serde(flatten)]
    pub config: ExperimentConfig,
    pub dim: usize,
    pub n_init: usize,
    pub f_star: f64,
    pub total_evaluations: usize,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn benchmark(&self) -> Result<Benchmark> {
        self.problem.parse()
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repetitions as u64).map(|i| self.base_seed + i).collect()
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let b = self.benchmark()?;
        if self.repetitions < 1 {
            return Err(invalid("at least one repetition is required"));
        }
        if self.k < 1 {
            return Err(invalid("batch size must be at least 1"));
        }
        if !(self.eta >= 0.0) {
            return Err(invalid("eta must be non-negative"));
        }
        let n_init = self.n_init.unwrap_or(11 * b.dim() - 1);
        Ok(ResolvedConfig {
            config: self.clone(),
            dim: b.dim(),
            n_init,
            f_star: b.f_star(),
            total_evaluations: n_init + self.k * self.iterations,
            seeds: self.seeds(),
        })
    }

    pub fn run_config(&self, seed: u64, options: EngineOptions) -> DmeaConfig {
        DmeaConfig {
            k: self.k,
            iterations: self.iterations,
            eta: self.eta,
            seed,
            select_mode: self.select_mode,
            n_init: self.n_init,
            options,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: RunRecord,
    /// Seconds.
    pub wall_time: f64,
}

impl RunOutcome {
    pub fn row(&self, f_star: f64) -> ResultRow {
        ResultRow::new(&self.record, f_star, self.wall_time)
    }
}

/// One run of `algorithm` on `problem`.
pub fn run_once(problem: Benchmark, algorithm: Algorithm, config: &DmeaConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let record = match algorithm {
        Algorithm::Dmea => run_dmea(&problem, config)?,
        Algorithm::EiLp => run_ei_lp(&problem, config)?,
        Algorithm::RandomSearch => run_random_search(&problem, config)?,
    };
    Ok(RunOutcome { record, wall_time: start.elapsed().as_secs_f64() })
}

/// Runs every repetition, at most `jobs` at a time, and returns the outcomes
/// in seed order. `on_result` sees each outcome as it completes, always on the
/// calling thread.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    options: &EngineOptions,
    jobs: usize,
    mut on_result: impl FnMut(&RunOutcome) -> Result<()>,
) -> Result<Vec<RunOutcome>> {
    let resolved = config.resolve()?;
    let problem = config.benchmark()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    let (tx, rx) = mpsc::channel();
    let seeds = resolved.seeds.clone();
    let mut slots: Vec<Option<RunOutcome>> = vec![None; seeds.len()];
    pool.in_place_scope(|scope| {
        for (index, &seed) in seeds.iter().enumerate() {
            let tx = tx.clone();
            let run = config.run_config(seed, options.clone());
            scope.spawn(move |_| {
                let _ = tx.send((index, run_once(problem, config.algorithm, &run)));
            });
        }
        drop(tx);
        for (index, outcome) in rx.iter() {
            let outcome = outcome?;
            on_result(&outcome)?;
            slots[index] = Some(outcome);
        }
        Ok::<(), crate::Error>(())
    })?;
    Ok(slots.into_iter().map(|s| s.expect("every repetition reports")).collect())
}

pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Vec<RunOutcome>> {
    run_experiment_with(config, &EngineOptions::default(), jobs, |_| Ok(()))
}

/// Runs an experiment and writes the resolved config, one JSON record per run
/// and the results CSV into `out`. Rows are appended to an existing CSV.
pub fn run_experiment_to_dir(config: &ExperimentConfig, jobs: usize, out: &Path) -> Result<Vec<RunOutcome>> {
    let resolved = config.resolve()?;
    std::fs::create_dir_all(out)?;
    persist::write_config(out, &resolved)?;
    let outcomes = run_experiment_with(config, &EngineOptions::default(), jobs, |o| write_record(out, &o.record).map(drop))?;
    let mut rows = if out.join(RESULTS_FILE).exists() { read_csv(&out.join(RESULTS_FILE))? } else { Vec::new() };
    rows.extend(outcomes.iter().map(|o| o.row(resolved.f_star)));
    write_csv(&out.join(RESULTS_FILE), &rows)?;
    Ok(outcomes)
}

/// The η grid followed by the random-select ablation at the base η.
pub fn sweep_configs(base: &ExperimentConfig, etas: &[f64]) -> Vec<ExperimentConfig> {
    let mut out: Vec<ExperimentConfig> = etas
        .iter()
        .map(|&eta| ExperimentConfig { eta, algorithm: Algorithm::Dmea, select_mode: SelectMode::Preferred, ..base.clone() })
        .collect();
    out.push(ExperimentConfig { algorithm: Algorithm::Dmea, select_mode: SelectMode::Random, ..base.clone() });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(algorithm: Algorithm) -> ExperimentConfig {
        ExperimentConfig { algorithm, iterations: 2, repetitions: 3, base_seed: 5, ..Default::default() }
    }

    #[test]
    fn resolved_counts() {
        let r = ExperimentConfig::default().resolve().unwrap();
        assert_eq!((r.n_init, r.total_evaluations), (21, 201));
        let h = ExperimentConfig { problem: "hartmann6".into(), k: 10, ..Default::default() }.resolve().unwrap();
        assert_eq!((h.n_init, h.total_evaluations), (65, 515));
        assert_eq!(tiny(Algorithm::Dmea).seeds(), vec![5, 6, 7]);
        assert!(ExperimentConfig { problem: "nope".into(), ..Default::default() }.resolve().is_err());
        assert!(ExperimentConfig { repetitions: 0, ..Default::default() }.resolve().is_err());
    }

    #[test]
    fn outcomes_in_seed_order() {
        let out = run_experiment(&tiny(Algorithm::RandomSearch), 2).unwrap();
        let seeds: Vec<u64> = out.iter().map(|o| o.record.config.seed).collect();
        assert_eq!(seeds, vec![5, 6, 7]);
        assert!(out.iter().all(|o| o.record.total_evaluations() == 21 + 8));
    }

    #[test]
    fn sweep_layout() {
        let c = sweep_configs(&ExperimentConfig::default(), &ETA_GRID);
        assert_eq!(c.len(), 5);
        assert_eq!(c[2].eta, 0.5);
        assert_eq!(c[4].select_mode, SelectMode::Random);
    }
}
