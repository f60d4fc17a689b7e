//! The DMEA batch loop.
//!
//! Each iteration scores all seven bank members against the previous batch
//! (how well their local-penalization thresholds separated good from poor
//! points), keeps the three with the smallest cumulative penalty, solves the
//! three-objective problem of their negated scores with NSGA-II, and draws
//! the next batch from the Pareto set: the per-objective extremes plus a
//! layered selection guided by the penalties.

mod baselines;
mod penalty;
mod record;
mod select;

pub use baselines::{run_ei_lp, run_random_search};
pub use penalty::{
    quality_indicator, recent_penalty, recommendation_indicator, ConfidenceVector, Judged, PenaltyLedger,
    QUALITY_RANK_LIMIT,
};
pub use record::{DmeaStep, Evaluation, IterationRecord, RunConfig, RunRecord, SCHEMA_VERSION};
pub use select::{
    confident_level, extreme_solutions, objective_thresholds, preferred_select, random_select, Extremes, Selection,
    SelectionReport,
};

use crate::acquisition::{bank, Acquisition};
use crate::domain::{random_unit_point, BlackBox, Domain};
use crate::error::{invalid, Error, Result};
use crate::gp::{FitOptions, GpModel};
use crate::lhs::latin_hypercube;
use crate::maximize::MaximizeOptions;
use crate::nsga2::{distance, run_nsga2, Nsga2Options};
use crate::penalization::{threshold_g, LpContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Dmea,
    EiLp,
    RandomSearch,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dmea => "dmea",
            Algorithm::EiLp => "ei-lp",
            Algorithm::RandomSearch => "random-search",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dmea" => Ok(Algorithm::Dmea),
            "ei-lp" => Ok(Algorithm::EiLp),
            "random-search" | "random" => Ok(Algorithm::RandomSearch),
            _ => Err(Error::UnknownAlgorithm(s.to_string())),
        }
    }
}

/// How the non-extreme part of a DMEA batch is drawn from the Pareto set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectMode {
    #[default]
    Preferred,
    Random,
}

impl SelectMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectMode::Preferred => "preferred",
            SelectMode::Random => "random",
        }
    }
}

impl fmt::Display for SelectMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "preferred" => Ok(SelectMode::Preferred),
            "random" => Ok(SelectMode::Random),
            _ => Err(invalid(format!("unknown select mode `{s}`"))),
        }
    }
}

/// Numerical settings of the inner solvers.
#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// GP fit on the initial design.
    pub initial_fit: FitOptions,
    /// GP refits inside the loop; the previous hyperparameters become the first start.
    pub refit: FitOptions,
    pub maximize: MaximizeOptions,
    pub nsga: Nsga2Options,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            initial_fit: FitOptions::default(),
            refit: FitOptions { restarts: 1, max_iters: 50, warm_start: None },
            maximize: MaximizeOptions::default(),
            nsga: Nsga2Options::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DmeaConfig {
    /// Batch size.
    pub k: usize,
    pub iterations: usize,
    /// Decay of the cumulative penalty.
    pub eta: f64,
    pub seed: u64,
    pub select_mode: SelectMode,
    /// Initial design size; `None` means `11·d − 1`.
    pub n_init: Option<usize>,
    pub options: EngineOptions,
}

impl Default for DmeaConfig {
    fn default() -> Self {
        Self { k: 4, iterations: 45, eta: 0.0, seed: 0, select_mode: SelectMode::Preferred, n_init: None, options: EngineOptions::default() }
    }
}

impl DmeaConfig {
    pub fn initial_size(&self, dim: usize) -> usize {
        self.n_init.unwrap_or(11 * dim - 1)
    }

    pub(crate) fn echo(&self, problem: &dyn BlackBox, algorithm: Algorithm) -> RunConfig {
        RunConfig {
            problem: problem.name(),
            algorithm,
            k: self.k,
            iterations: self.iterations,
            eta: self.eta,
            select_mode: self.select_mode,
            n_init: self.initial_size(problem.dim()),
            seed: self.seed,
        }
    }
}

/// Latin hypercube design evaluated on the problem. Depends only on the seed,
/// so every algorithm run with the same seed starts from the same data.
pub fn initial_design(problem: &dyn BlackBox, n: usize, seed: u64) -> Vec<Evaluation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    latin_hypercube(n, &problem.bounds(), &mut rng)
        .into_iter()
        .map(|x| {
            let y = problem.evaluate(&x);
            Evaluation { x, y }
        })
        .collect()
}

/// Generator for everything after the initial design.
pub(crate) fn algorithm_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Replaces batch points closer than 1e-9 (unit cube) to the archive or to an
/// earlier batch member with uniform-random points. Returns how many were replaced.
pub(crate) fn replace_duplicates<R: Rng + ?Sized>(batch: &mut [Vec<f64>], archive: &[Vec<f64>], rng: &mut R) -> usize {
    let mut replaced = 0;
    for i in 0..batch.len() {
        let clash = |p: &[f64], batch: &[Vec<f64>]| {
            archive.iter().any(|a| distance(a, p) < 1e-9) || batch[..i].iter().any(|b| distance(b, p) < 1e-9)
        };
        let mut tries = 0;
        while clash(&batch[i], batch) && tries < 100 {
            batch[i] = random_unit_point(batch[i].len(), rng);
            tries += 1;
            if tries == 1 {
                replaced += 1;
            }
        }
    }
    replaced
}

pub(crate) fn check_run_shape(problem: &dyn BlackBox, k: usize, n_init: usize) -> Result<Domain> {
    let domain = Domain::new(problem.bounds())?;
    if k < 1 {
        return Err(invalid("batch size must be at least 1"));
    }
    if n_init < 2 {
        return Err(invalid("the initial design needs at least two points"));
    }
    Ok(domain)
}

/// Runs DMEA on `problem` and returns the full trace.
///
/// A GP that cannot be fitted even after nugget escalation ends the run
/// early; the record then carries the reason in `aborted`.
pub fn run_dmea(problem: &dyn BlackBox, config: &DmeaConfig) -> Result<RunRecord> {
    let d = problem.dim();
    let k = config.k;
    let n_init = config.initial_size(d);
    let domain = check_run_shape(problem, k, n_init)?;
    if k < 2 {
        return Err(invalid("DMEA needs a batch size of at least 2"));
    }
    if n_init < k + 2 {
        return Err(invalid(format!("the initial design ({n_init}) must exceed the batch size by two")));
    }
    if !(config.eta >= 0.0) {
        return Err(invalid("eta must be non-negative"));
    }

    let initial = initial_design(problem, n_init, config.seed);
    let mut record = RunRecord::start(config.echo(problem, Algorithm::Dmea), initial.clone());
    let mut rng = algorithm_rng(config.seed);
    let specs = bank();
    let opts = &config.options;

    // The k best initial pairs act as the previous batch; the rest are history.
    let mut order: Vec<usize> = (0..initial.len()).collect();
    order.sort_by(|&a, &b| initial[a].y.total_cmp(&initial[b].y));
    let mut last_batch: Vec<Evaluation> = order[..k].iter().map(|&i| initial[i].clone()).collect();
    let mut historical: Vec<Evaluation> = order[k..].iter().map(|&i| initial[i].clone()).collect();

    let fit = |hist: &[Evaluation], options: &FitOptions, rng: &mut ChaCha8Rng| {
        let xs: Vec<Vec<f64>> = hist.iter().map(|e| domain.to_unit(&e.x)).collect();
        let ys: Vec<f64> = hist.iter().map(|e| e.y).collect();
        GpModel::fit(&xs, &ys, options, rng)
    };
    let mut gp = match fit(&historical, &opts.initial_fit, &mut rng) {
        Ok(gp) => gp,
        Err(e) => {
            record.aborted = Some(format!("initial GP fit failed: {e}"));
            return Ok(record);
        }
    };
    let mut ledger = PenaltyLedger::new(specs.len(), config.eta);

    for iteration in 1..=config.iterations {
        // Score every candidate on the previous batch with the current GP.
        let hist_values: Vec<f64> = historical.iter().map(|e| e.y).collect();
        let f_star = hist_values.iter().copied().fold(f64::INFINITY, f64::min);
        let incumbent = last_batch.iter().map(|e| e.y).fold(f_star, f64::min);
        let quality: Vec<u8> = last_batch.iter().map(|e| quality_indicator(e.y, &hist_values)).collect();
        let batch_unit: Vec<Vec<f64>> = last_batch.iter().map(|e| domain.to_unit(&e.x)).collect();

        let ctx = LpContext::new(&gp, incumbent, opts.maximize.clone(), &mut rng);
        let mut thresholds = Vec::with_capacity(specs.len());
        let mut recent = Vec::with_capacity(specs.len());
        for spec in &specs {
            let g = threshold_g(&ctx, *spec, k, iteration, &mut rng)?;
            let acq = Acquisition::new(*spec, &gp, iteration, incumbent)?;
            let judged: Vec<Judged> = batch_unit
                .iter()
                .zip(&last_batch)
                .zip(&quality)
                .map(|((u, e), &q)| Judged {
                    quality: q,
                    recommended: recommendation_indicator(acq.value(u), g.value),
                    value: e.y,
                })
                .collect();
            recent.push(recent_penalty(&judged, f_star));
            thresholds.push((!g.degenerate).then_some(g.value));
        }
        ledger.update(&recent);

        historical.append(&mut last_batch);
        let refit = FitOptions { warm_start: Some(gp.hyperparameters().clone()), ..opts.refit.clone() };
        gp = match fit(&historical, &refit, &mut rng) {
            Ok(gp) => gp,
            Err(e) => {
                record.aborted = Some(format!("GP refit failed at iteration {iteration}: {e}"));
                return Ok(record);
            }
        };

        let triple = ledger.select_triple();
        let confidence = ledger.confidence(triple);
        let incumbent = historical.iter().map(|e| e.y).fold(f64::INFINITY, f64::min);
        let acqs = triple
            .map(|id| Acquisition::new(specs[id], &gp, iteration, incumbent))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let objective = |x: &[f64]| {
            let (m, v) = gp.predict_standardized(x);
            [-acqs[0].value_from_moments(m, v), -acqs[1].value_from_moments(m, v), -acqs[2].value_from_moments(m, v)]
        };
        let best_hist = historical.iter().min_by(|a, b| a.y.total_cmp(&b.y)).expect("non-empty history");
        let pareto = run_nsga2(objective, d, &opts.nsga, &[domain.to_unit(&best_hist.x)], &mut rng);

        let mut extremes = extreme_solutions(&pareto);
        extremes.indices.truncate(k);
        extremes.points.truncate(k);
        let m = extremes.len();
        let selection = match config.select_mode {
            SelectMode::Preferred => preferred_select(&pareto, &extremes.indices, &confidence, k - m, &mut rng),
            SelectMode::Random => random_select(&pareto, &extremes.indices, k - m, &mut rng),
        };
        if selection.report.padded > 0 {
            record.flags.push(format!("iteration {iteration}: padded {} random point(s)", selection.report.padded));
        }
        if selection.report.secondary_layer.is_none() && config.select_mode == SelectMode::Preferred && k > m {
            record.flags.push(format!("iteration {iteration}: only one non-empty preferred layer"));
        }

        let mut batch_points: Vec<Vec<f64>> = extremes.points.clone();
        batch_points.extend(selection.points);
        let archive_unit: Vec<Vec<f64>> = historical.iter().map(|e| domain.to_unit(&e.x)).collect();
        let replaced = replace_duplicates(&mut batch_points, &archive_unit, &mut rng);

        let batch: Vec<Evaluation> = batch_points
            .iter()
            .map(|u| {
                let x = domain.from_unit(u);
                let y = problem.evaluate(&x);
                Evaluation { x, y }
            })
            .collect();
        record.push(IterationRecord {
            iteration,
            batch: batch.clone(),
            replaced_duplicates: replaced,
            gp: Some(gp.hyperparameters().clone()),
            dmea: Some(DmeaStep {
                quality,
                thresholds,
                recent_penalty: ledger.recent.clone(),
                cumulative_penalty: ledger.cumulative.clone(),
                triple,
                confidence: confidence.0,
                pareto_size: pareto.len(),
                extremes: m,
                selection: selection.report,
            }),
        });
        last_batch = batch;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Benchmark;

    fn quick(k: usize, iterations: usize, seed: u64) -> DmeaConfig {
        let mut options = EngineOptions::default();
        options.nsga = Nsga2Options { pop_size: 20, generations: 10, ..Default::default() };
        DmeaConfig { k, iterations, seed, options, ..Default::default() }
    }

    #[test]
    fn zero_iterations_keeps_initial_best() {
        let r = run_dmea(&Benchmark::Branin, &quick(4, 0, 1)).unwrap();
        assert_eq!(r.total_evaluations(), 21);
        let best = r.initial.iter().map(|e| e.y).fold(f64::INFINITY, f64::min);
        assert_eq!(r.best_value(), best);
        assert_eq!(r.incumbent_trace, vec![best]);
    }

    #[test]
    fn short_run_invariants() {
        let cfg = quick(4, 3, 7);
        let r = run_dmea(&Benchmark::SixHumpCamel, &cfg).unwrap();
        assert!(r.aborted.is_none());
        assert_eq!(r.total_evaluations(), 21 + 12);
        let domain = Domain::new(Benchmark::SixHumpCamel.bounds()).unwrap();
        for it in &r.iterations {
            assert_eq!(it.batch.len(), 4);
            assert!(it.batch.iter().all(|e| domain.contains(&e.x)));
            let step = it.dmea.as_ref().unwrap();
            assert_eq!(step.cumulative_penalty, step.recent_penalty);
            assert_eq!(step.thresholds.len(), 7);
            let sizes: usize = step.selection.layer_sizes.iter().sum();
            assert_eq!(sizes + step.extremes, step.pareto_size);
        }
        // the pseudo-batch of the k best initial points beats all of history
        assert_eq!(r.iterations[0].dmea.as_ref().unwrap().quality, vec![1; 4]);
        assert!(r.incumbent_trace.windows(2).all(|w| w[1] <= w[0]));
        let all: Vec<&Evaluation> = r.evaluations().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[..i] {
                assert!(distance(&domain.to_unit(&a.x), &domain.to_unit(&b.x)) >= 1e-9);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = run_dmea(&Benchmark::Branin, &quick(4, 2, 3)).unwrap();
        let b = run_dmea(&Benchmark::Branin, &quick(4, 2, 3)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(run_dmea(&Benchmark::Branin, &quick(1, 1, 0)).is_err());
        let mut c = quick(4, 1, 0);
        c.n_init = Some(5);
        assert!(run_dmea(&Benchmark::Branin, &c).is_err());
        c.n_init = None;
        c.eta = -1.0;
        assert!(run_dmea(&Benchmark::Branin, &c).is_err());
    }

    #[test]
    fn duplicate_replacement() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut batch = vec![vec![0.5, 0.5], vec![0.1, 0.1], vec![0.1, 0.1]];
        let n = replace_duplicates(&mut batch, &[vec![0.5, 0.5]], &mut rng);
        assert_eq!(n, 2);
        assert_ne!(batch[0], vec![0.5, 0.5]);
        assert_eq!(batch[1], vec![0.1, 0.1]);
        assert_ne!(batch[2], vec![0.1, 0.1]);
    }

    #[test]
    fn names_parse() {
        assert_eq!("ei-lp".parse::<Algorithm>().unwrap(), Algorithm::EiLp);
        assert!("qei".parse::<Algorithm>().is_err());
        assert_eq!("random".parse::<SelectMode>().unwrap(), SelectMode::Random);
        assert_eq!(serde_json::to_string(&Algorithm::RandomSearch).unwrap(), "\"random-search\"");
    }
}
