//! Gaussian-process regression with an ARD Matérn 5/2 kernel.
//!
//! The model always works on inputs normalized to the unit cube and on
//! outputs standardized to zero mean and unit variance; the affine output
//! transform is kept so predictions come back in original units.
//! Hyperparameters are fitted by maximizing the log marginal likelihood with
//! a projected quasi-Newton method from several starting points.

mod kernel;
mod likelihood;
mod linalg;
mod optimize;

pub use kernel::{matern52, matern52_ard};
pub use likelihood::log_marginal_likelihood;

use crate::error::{invalid, Error, Result};
use kernel::{scaled_distance, SQRT5};
use likelihood::LikelihoodData;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const LENGTHSCALE_BOUNDS: (f64, f64) = (0.01, 10.0);
pub const SIGNAL_VARIANCE_BOUNDS: (f64, f64) = (1e-3, 1e3);
pub const DEFAULT_NUGGET: f64 = 1e-6;
pub const MAX_NUGGET: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpHyperparameters {
    /// One per input dimension, in normalized-input units.
    pub lengthscales: Vec<f64>,
    /// In standardized-output units squared.
    pub signal_variance: f64,
    pub nugget: f64,
}

impl GpHyperparameters {
    pub fn isotropic(dim: usize, lengthscale: f64, signal_variance: f64) -> Self {
        Self { lengthscales: vec![lengthscale; dim], signal_variance, nugget: DEFAULT_NUGGET }
    }

    pub fn dim(&self) -> usize {
        self.lengthscales.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengthscales.is_empty() {
            return Err(invalid("at least one lengthscale is required"));
        }
        if self.lengthscales.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(invalid("lengthscales must be positive and finite"));
        }
        if !(self.signal_variance > 0.0 && self.signal_variance.is_finite()) {
            return Err(invalid("signal variance must be positive"));
        }
        if !(self.nugget >= 0.0) {
            return Err(invalid("nugget must be non-negative"));
        }
        Ok(())
    }

    /// `[log ℓ_1, …, log ℓ_d, log σ_f²]`.
    pub fn log_params(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.lengthscales.iter().map(|l| l.ln()).collect();
        p.push(self.signal_variance.ln());
        p
    }

    pub fn from_log_params(p: &[f64], nugget: f64) -> Self {
        let d = p.len() - 1;
        Self {
            lengthscales: p[..d].iter().map(|v| v.exp()).collect(),
            signal_variance: p[d].exp(),
            nugget,
        }
    }
}

/// Affine output transform `y_std = (y − mean) / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: f64,
    pub scale: f64,
}

impl Standardizer {
    pub fn identity() -> Self {
        Self { mean: 0.0, scale: 1.0 }
    }

    /// Mean and population standard deviation of `y`. A spread below 1e-12
    /// (constant outputs) falls back to unit scale.
    pub fn fit(y: &[f64]) -> Self {
        let n = y.len() as f64;
        let mean = y.iter().sum::<f64>() / n;
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        Self { mean, scale: if sd < 1e-12 { 1.0 } else { sd } }
    }

    pub fn is_degenerate_for(&self, y: &[f64]) -> bool {
        self.scale == 1.0 && y.iter().all(|v| (v - self.mean).abs() < 1e-12)
    }

    pub fn forward(&self, y: f64) -> f64 {
        (y - self.mean) / self.scale
    }

    pub fn inverse(&self, y: f64) -> f64 {
        y * self.scale + self.mean
    }
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Number of quasi-Newton ascents.
    pub restarts: usize,
    pub max_iters: usize,
    /// Replaces the default first starting point (ℓ = 0.5, σ_f² = 1).
    pub warm_start: Option<GpHyperparameters>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { restarts: 5, max_iters: 100, warm_start: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
    /// The query point was outside the unit cube.
    pub outside_domain: bool,
}

/// A fitted, immutable GP surrogate.
#[derive(Debug, Clone)]
pub struct GpModel {
    n: usize,
    d: usize,
    /// Row-major `n × d` normalized inputs.
    x: Vec<f64>,
    y_raw: Vec<f64>,
    y_std: Vec<f64>,
    transform: Standardizer,
    hyper: GpHyperparameters,
    /// Row-major lower Cholesky factor of `K + nugget·I`.
    chol: Vec<f64>,
    /// `(K + nugget·I)⁻¹ y_std`.
    alpha: Vec<f64>,
    log_likelihood: f64,
}

impl GpModel {
    /// Fits hyperparameters by multi-start maximization of the log marginal likelihood.
    ///
    /// `x` must lie in the unit cube; `y` is in original units and is
    /// standardized internally. On factorization failure the nugget is
    /// escalated tenfold up to 1e-2 before giving up.
    pub fn fit<R: Rng + ?Sized>(x: &[Vec<f64>], y: &[f64], options: &FitOptions, rng: &mut R) -> Result<Self> {
        let d = check_training_data(x, y)?;
        let transform = Standardizer::fit(y);
        let y_std: Vec<f64> = y.iter().map(|v| transform.forward(*v)).collect();
        let flat: Vec<f64> = x.iter().flatten().copied().collect();

        if transform.is_degenerate_for(y) {
            let hyper = GpHyperparameters {
                lengthscales: vec![0.5; d],
                signal_variance: SIGNAL_VARIANCE_BOUNDS.0,
                nugget: DEFAULT_NUGGET,
            };
            return Self::assemble_escalating(flat, d, y.to_vec(), y_std, transform, hyper);
        }

        let lower: Vec<f64> = std::iter::repeat(LENGTHSCALE_BOUNDS.0.ln())
            .take(d)
            .chain([SIGNAL_VARIANCE_BOUNDS.0.ln()])
            .collect();
        let upper: Vec<f64> = std::iter::repeat(LENGTHSCALE_BOUNDS.1.ln())
            .take(d)
            .chain([SIGNAL_VARIANCE_BOUNDS.1.ln()])
            .collect();
        let mut starts = Vec::with_capacity(options.restarts.max(1));
        starts.push(match &options.warm_start {
            Some(h) if h.dim() == d => h.log_params(),
            _ => GpHyperparameters::isotropic(d, 0.5, 1.0).log_params(),
        });
        for _ in 1..options.restarts.max(1) {
            starts.push(lower.iter().zip(&upper).map(|(lo, hi)| rng.gen_range(*lo..*hi)).collect());
        }

        let data = LikelihoodData::new(&flat, d, &y_std);
        let mut nugget = DEFAULT_NUGGET;
        loop {
            let mut best: Option<(Vec<f64>, f64)> = None;
            for start in &starts {
                let objective = |p: &[f64]| {
                    data.evaluate(p, nugget).ok().map(|(v, g)| (-v, g.into_iter().map(|x| -x).collect()))
                };
                if let Some((p, f)) = optimize::minimize_box(objective, start, &lower, &upper, options.max_iters) {
                    if best.as_ref().map_or(true, |(_, bf)| f < *bf) {
                        best = Some((p, f));
                    }
                }
            }
            if let Some((p, _)) = best {
                let hyper = GpHyperparameters::from_log_params(&p, nugget);
                if let Ok(model) = Self::assemble(flat.clone(), d, y.to_vec(), y_std.clone(), transform, hyper) {
                    return Ok(model);
                }
            }
            if nugget >= MAX_NUGGET {
                return Err(Error::IllConditioned { nugget });
            }
            nugget = (nugget * 10.0).min(MAX_NUGGET);
        }
    }

    /// Builds a model with fixed hyperparameters; `y` is standardized internally.
    pub fn with_hyperparameters(x: &[Vec<f64>], y: &[f64], hyper: GpHyperparameters) -> Result<Self> {
        let transform = Standardizer::fit(y);
        Self::with_transform(x, y, hyper, transform)
    }

    /// Builds a model with fixed hyperparameters and an explicit output transform.
    pub fn with_transform(
        x: &[Vec<f64>],
        y: &[f64],
        hyper: GpHyperparameters,
        transform: Standardizer,
    ) -> Result<Self> {
        let d = check_training_data(x, y)?;
        hyper.validate()?;
        if hyper.dim() != d {
            return Err(invalid(format!("hyperparameters have dimension {}, data {d}", hyper.dim())));
        }
        let y_std = y.iter().map(|v| transform.forward(*v)).collect();
        let flat = x.iter().flatten().copied().collect();
        Self::assemble(flat, d, y.to_vec(), y_std, transform, hyper)
    }

    fn assemble_escalating(
        flat: Vec<f64>,
        d: usize,
        y_raw: Vec<f64>,
        y_std: Vec<f64>,
        transform: Standardizer,
        mut hyper: GpHyperparameters,
    ) -> Result<Self> {
        loop {
            match Self::assemble(flat.clone(), d, y_raw.clone(), y_std.clone(), transform, hyper.clone()) {
                Err(Error::IllConditioned { nugget }) if nugget < MAX_NUGGET => {
                    hyper.nugget = (nugget * 10.0).min(MAX_NUGGET);
                }
                other => return other,
            }
        }
    }

    fn assemble(
        x: Vec<f64>,
        d: usize,
        y_raw: Vec<f64>,
        y_std: Vec<f64>,
        transform: Standardizer,
        hyper: GpHyperparameters,
    ) -> Result<Self> {
        let n = y_std.len();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let r = scaled_distance(&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d], &hyper.lengthscales);
                gram[i * n + j] = hyper.signal_variance * matern52(r) + if i == j { hyper.nugget } else { 0.0 };
            }
        }
        let flat_l = linalg::cholesky(&gram, n).ok_or(Error::IllConditioned { nugget: hyper.nugget })?;
        let alpha = linalg::cholesky_solve(&flat_l, n, &y_std);
        let half_logdet: f64 = (0..n).map(|i| flat_l[i * n + i].ln()).sum();
        let log_likelihood =
            -0.5 * linalg::dot(&y_std, &alpha) - half_logdet - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
        Ok(Self {
            n,
            d,
            x,
            y_raw,
            y_std,
            transform,
            hyper,
            chol: flat_l,
            alpha,
            log_likelihood,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn hyperparameters(&self) -> &GpHyperparameters {
        &self.hyper
    }

    pub fn transform(&self) -> Standardizer {
        self.transform
    }

    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    pub fn train_point(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn train_points(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.d)
    }

    /// Training outputs in original units.
    pub fn train_values(&self) -> &[f64] {
        &self.y_raw
    }

    pub fn train_values_standardized(&self) -> &[f64] {
        &self.y_std
    }

    /// Smallest training output in original units.
    pub fn best_value(&self) -> f64 {
        self.y_raw.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Posterior mean and variance in standardized output units.
    ///
    /// Panics if `x` does not have the model's dimension.
    pub fn predict_standardized(&self, x: &[f64]) -> (f64, f64) {
        assert_eq!(x.len(), self.d, "query dimension mismatch");
        let n = self.n;
        let mut v = Vec::with_capacity(n);
        let mut mean = 0.0;
        for (i, xi) in self.x.chunks_exact(self.d).enumerate() {
            let k = self.hyper.signal_variance * matern52(scaled_distance(x, xi, &self.hyper.lengthscales));
            mean += k * self.alpha[i];
            v.push(k);
        }
        linalg::forward_solve(&self.chol, n, &mut v);
        let var = self.hyper.signal_variance - v.iter().map(|t| t * t).sum::<f64>();
        (mean, var.max(0.0))
    }

    /// Posterior mean and variance in original output units.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.d {
            return Err(invalid(format!("query has dimension {}, model {}", x.len(), self.d)));
        }
        let (m, v) = self.predict_standardized(x);
        Ok(Prediction {
            mean: self.transform.inverse(m),
            variance: v * self.transform.scale * self.transform.scale,
            outside_domain: x.iter().any(|c| !(0.0..=1.0).contains(c)),
        })
    }

    /// Gradient of the posterior mean (original output units) with respect to
    /// the normalized input.
    pub fn predict_mean_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(invalid(format!("query has dimension {}, model {}", x.len(), self.d)));
        }
        let ls = &self.hyper.lengthscales;
        let mut grad = vec![0.0; self.d];
        for (i, xi) in self.x.chunks_exact(self.d).enumerate() {
            let s = SQRT5 * scaled_distance(x, xi, ls);
            // dk/dx_p = −σ² (5/3)(1 + √5 r) e^{−√5 r} (x_p − xi_p)/ℓ_p²
            let c = -self.hyper.signal_variance * (5.0 / 3.0) * (1.0 + s) * (-s).exp() * self.alpha[i];
            for p in 0..self.d {
                grad[p] += c * (x[p] - xi[p]) / (ls[p] * ls[p]);
            }
        }
        grad.iter_mut().for_each(|g| *g *= self.transform.scale);
        Ok(grad)
    }
}

fn check_training_data(x: &[Vec<f64>], y: &[f64]) -> Result<usize> {
    if x.is_empty() {
        return Err(invalid("at least one training point is required"));
    }
    if x.len() != y.len() {
        return Err(invalid(format!("{} inputs but {} outputs", x.len(), y.len())));
    }
    let d = x[0].len();
    if d == 0 || x.iter().any(|r| r.len() != d) {
        return Err(invalid("training inputs must share a non-zero dimension"));
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(invalid("training data must be finite"));
    }
    Ok(d)
}

#[cfg(test)]
mod tests;
