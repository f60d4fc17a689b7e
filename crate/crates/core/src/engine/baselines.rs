//! Reference algorithms sharing the DMEA run format: EI with local
//! penalization, and uniform random search.

use super::{algorithm_rng, check_run_shape, initial_design, replace_duplicates, Algorithm, DmeaConfig};
use super::{Evaluation, IterationRecord, RunRecord};
use crate::acquisition::bank;
use crate::domain::{random_unit_point, BlackBox};
use crate::gp::{FitOptions, GpModel};
use crate::penalization::{propose_batch_lp, LpContext};
use crate::Result;

/// Batches of `k` points from local penalization of EI, refitting the GP on
/// all data every iteration. Uses the same initial design as DMEA for a given seed.
pub fn run_ei_lp(problem: &dyn BlackBox, config: &DmeaConfig) -> Result<RunRecord> {
    let n_init = config.initial_size(problem.dim());
    let domain = check_run_shape(problem, config.k, n_init)?;
    let mut record = RunRecord::start(config.echo(problem, Algorithm::EiLp), initial_design(problem, n_init, config.seed));
    let mut rng = algorithm_rng(config.seed);
    let ei = bank()[0];
    let opts = &config.options;
    let mut data: Vec<Evaluation> = record.initial.clone();
    let mut warm: Option<crate::gp::GpHyperparameters> = None;

    for iteration in 1..=config.iterations {
        let xs: Vec<Vec<f64>> = data.iter().map(|e| domain.to_unit(&e.x)).collect();
        let ys: Vec<f64> = data.iter().map(|e| e.y).collect();
        let fit_opts = match &warm {
            None => opts.initial_fit.clone(),
            Some(h) => FitOptions { warm_start: Some(h.clone()), ..opts.refit.clone() },
        };
        let gp = match GpModel::fit(&xs, &ys, &fit_opts, &mut rng) {
            Ok(gp) => gp,
            Err(e) => {
                record.aborted = Some(format!("GP fit failed at iteration {iteration}: {e}"));
                return Ok(record);
            }
        };
        warm = Some(gp.hyperparameters().clone());
        let ctx = LpContext::new(&gp, gp.best_value(), opts.maximize.clone(), &mut rng);
        let mut points: Vec<Vec<f64>> =
            propose_batch_lp(&ctx, ei, config.k, iteration, &mut rng)?.into_iter().map(|p| p.point).collect();
        let replaced = replace_duplicates(&mut points, &xs, &mut rng);
        let batch: Vec<Evaluation> = points
            .iter()
            .map(|u| {
                let x = domain.from_unit(u);
                let y = problem.evaluate(&x);
                Evaluation { x, y }
            })
            .collect();
        data.extend(batch.iter().cloned());
        record.push(IterationRecord { iteration, batch, replaced_duplicates: replaced, gp: warm.clone(), dmea: None });
    }
    Ok(record)
}

/// `k` uniform points per iteration after the shared initial design.
pub fn run_random_search(problem: &dyn BlackBox, config: &DmeaConfig) -> Result<RunRecord> {
    let n_init = config.initial_size(problem.dim());
    let domain = check_run_shape(problem, config.k, n_init)?;
    let mut record =
        RunRecord::start(config.echo(problem, Algorithm::RandomSearch), initial_design(problem, n_init, config.seed));
    let mut rng = algorithm_rng(config.seed);
    for iteration in 1..=config.iterations {
        let batch = (0..config.k)
            .map(|_| {
                let x = domain.from_unit(&random_unit_point(domain.dim(), &mut rng));
                let y = problem.evaluate(&x);
                Evaluation { x, y }
            })
            .collect();
        record.push(IterationRecord { iteration, batch, replaced_duplicates: 0, gp: None, dmea: None });
    }
    Ok(record)
}
