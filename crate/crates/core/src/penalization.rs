//! Local penalization: greedy batch construction that down-weights the
//! acquisition around points already placed in the batch.
//!
//! Each chosen point `c` contributes a penalizer
//! `Φ((L‖x − c‖ − (μ(c) − M)) / (√2 σ(c)))`, where `L` bounds the gradient
//! norm of the posterior mean and `M` is the best observed value: a ball of
//! radius `(μ(c) − M)/L` around `c` cannot contain the minimizer. The
//! penalized objective is accumulated in log space.

use crate::acquisition::{Acquisition, AcquisitionSpec};
use crate::error::Result;
use crate::gp::GpModel;
use crate::lhs::unit_latin_hypercube;
use crate::maximize::{maximize_from, start_points, MaximizeOptions};
use crate::normal;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

/// Floor applied to acquisition values before taking logs.
pub const LOG_FLOOR: f64 = 1e-50;
pub const LIPSCHITZ_FLOOR: f64 = 1e-7;

/// Largest posterior-mean gradient norm over `500·d` Latin hypercube samples
/// of the unit cube, floored at 1e-7.
pub fn estimate_lipschitz<R: Rng + ?Sized>(model: &GpModel, rng: &mut R) -> f64 {
    let d = model.dim();
    unit_latin_hypercube(500 * d, d, rng)
        .iter()
        .map(|x| {
            let g = model.predict_mean_gradient(x).expect("dimension matches");
            g.iter().map(|v| v * v).sum::<f64>().sqrt()
        })
        .fold(LIPSCHITZ_FLOOR, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Penalizer {
    pub center: Vec<f64>,
    pub lipschitz: f64,
    pub best_value: f64,
    center_mean: f64,
    center_sd: f64,
}

impl Penalizer {
    pub fn new(center: Vec<f64>, lipschitz: f64, best_value: f64, model: &GpModel) -> Result<Self> {
        let p = model.predict(&center)?;
        Ok(Self::from_moments(center, lipschitz, best_value, p.mean, p.variance.sqrt()))
    }

    /// Penalizer with the posterior moments at the center given directly (original units).
    pub fn from_moments(center: Vec<f64>, lipschitz: f64, best_value: f64, center_mean: f64, center_sd: f64) -> Self {
        Self { center, lipschitz, best_value, center_mean, center_sd: center_sd.max(1e-12) }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let dist = x.iter().zip(&self.center).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let z = (self.lipschitz * dist - (self.center_mean - self.best_value)) / (SQRT_2 * self.center_sd);
        normal::cdf(z).max(f64::MIN_POSITIVE)
    }
}

/// Everything the proposals for one model share: the Lipschitz estimate, the
/// incumbent, and the archive points used as extra maximizer starts.
#[derive(Debug, Clone)]
pub struct LpContext<'m> {
    pub model: &'m GpModel,
    pub lipschitz: f64,
    pub incumbent: f64,
    pub seeds: Vec<Vec<f64>>,
    pub options: MaximizeOptions,
}

impl<'m> LpContext<'m> {
    /// Estimates `L` from the model; the training inputs become the extra starts.
    pub fn new<R: Rng + ?Sized>(model: &'m GpModel, incumbent: f64, options: MaximizeOptions, rng: &mut R) -> Self {
        let lipschitz = estimate_lipschitz(model, rng);
        let seeds = model.train_points().map(|p| p.to_vec()).collect();
        Self { model, lipschitz, incumbent, seeds, options }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub point: Vec<f64>,
    /// Unpenalized acquisition value at `point`.
    pub value: f64,
}

/// Greedily proposes `n` points for `spec`.
///
/// The first point maximizes the raw acquisition; each later one maximizes
/// `log(acquisition) + Σ log(penalizer)` over all previously chosen points.
/// LCB scores can be negative, so they are shifted by `1 + |min score|` over
/// the start set before the log.
pub fn propose_batch_lp<R: Rng + ?Sized>(
    ctx: &LpContext<'_>,
    spec: AcquisitionSpec,
    n: usize,
    iteration: usize,
    rng: &mut R,
) -> Result<Vec<Proposal>> {
    let acq = Acquisition::new(spec, ctx.model, iteration, ctx.incumbent)?;
    let starts = start_points(ctx.model.dim(), &ctx.seeds, &ctx.options, rng);
    let shift = if spec.is_lcb() {
        let min = starts.iter().map(|s| acq.value(s)).fold(f64::INFINITY, f64::min);
        1.0 + min.abs()
    } else {
        0.0
    };

    let mut proposals: Vec<Proposal> = Vec::with_capacity(n);
    let mut penalizers: Vec<Penalizer> = Vec::with_capacity(n);
    for _ in 0..n {
        let (point, _) = if penalizers.is_empty() {
            maximize_from(|x: &[f64]| acq.value(x), &starts, &ctx.options)
        } else {
            let penalized = |x: &[f64]| {
                let mut v = (acq.value(x) + shift).max(LOG_FLOOR).ln();
                for p in &penalizers {
                    v += p.value(x).ln();
                }
                v
            };
            maximize_from(penalized, &starts, &ctx.options)
        };
        let value = acq.value(&point);
        penalizers.push(Penalizer::new(point.clone(), ctx.lipschitz, ctx.incumbent, ctx.model)?);
        proposals.push(Proposal { point, value });
    }
    Ok(proposals)
}

/// Outcome of a threshold computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Smallest raw acquisition value among the proposals, or `-inf` when degenerate.
    pub value: f64,
    /// The proposals were not pairwise distinct, so the threshold was opened up.
    pub degenerate: bool,
}

/// Runs local penalization for `⌊k/2⌋` proposals and returns the smallest
/// unpenalized acquisition value among them.
///
/// If the proposals are not pairwise distinct (closer than 1e-9), the
/// threshold falls back to `-inf`, i.e. every point counts as recommended.
pub fn threshold_g<R: Rng + ?Sized>(
    ctx: &LpContext<'_>,
    spec: AcquisitionSpec,
    k: usize,
    iteration: usize,
    rng: &mut R,
) -> Result<Threshold> {
    if k < 2 {
        return Err(crate::error::invalid("threshold needs a batch size of at least 2"));
    }
    let proposals = propose_batch_lp(ctx, spec, k / 2, iteration, rng)?;
    let distinct = proposals.iter().enumerate().all(|(i, a)| {
        proposals[..i]
            .iter()
            .all(|b| a.point.iter().zip(&b.point).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt() >= 1e-9)
    });
    if !distinct {
        return Ok(Threshold { value: f64::NEG_INFINITY, degenerate: true });
    }
    let value = proposals.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    Ok(Threshold { value, degenerate: false })
}
