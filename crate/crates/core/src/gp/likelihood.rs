//! Log marginal likelihood of a zero-mean GP and its gradient in log-hyperparameter space.

use super::kernel::SQRT5;
use super::GpHyperparameters;
use crate::error::{invalid, Error, Result};
use super::linalg::{cholesky, cholesky_inverse_upper, cholesky_solve, dot};
use std::f64::consts::PI;

/// Training data with per-pair squared coordinate differences precomputed, so
/// repeated likelihood evaluations during fitting only pay for the kernel.
pub(crate) struct LikelihoodData<'a> {
    n: usize,
    d: usize,
    y: &'a [f64],
    /// `(x_i − x_j)²` per dimension for every pair `i < j`, row-major over pairs.
    sq: Vec<f64>,
}

impl<'a> LikelihoodData<'a> {
    pub(crate) fn new(x_flat: &[f64], d: usize, y: &'a [f64]) -> Self {
        let n = y.len();
        let mut sq = Vec::with_capacity(n * n.saturating_sub(1) / 2 * d);
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..d {
                    let t = x_flat[i * d + k] - x_flat[j * d + k];
                    sq.push(t * t);
                }
            }
        }
        Self { n, d, y, sq }
    }

    /// Value and gradient with respect to `[log ℓ_1, …, log ℓ_d, log σ_f²]`.
    pub(crate) fn evaluate(&self, log_params: &[f64], nugget: f64) -> Result<(f64, Vec<f64>)> {
        let (n, d) = (self.n, self.d);
        let inv_l2: Vec<f64> = log_params[..d].iter().map(|v| (-2.0 * v).exp()).collect();
        let sf2 = log_params[d].exp();

        let npairs = n * n.saturating_sub(1) / 2;
        let mut kval = Vec::with_capacity(npairs);
        let mut gfac = Vec::with_capacity(npairs);
        let mut gram = vec![0.0; n * n];
        let mut p = 0;
        for i in 0..n {
            gram[i * n + i] = sf2 + nugget;
            for j in i + 1..n {
                let sq = &self.sq[p * d..(p + 1) * d];
                let r2: f64 = sq.iter().zip(&inv_l2).map(|(a, b)| a * b).sum();
                let r = r2.sqrt();
                let s = SQRT5 * r;
                let e = (-s).exp();
                let k = sf2 * (1.0 + s + s * s / 3.0) * e;
                gram[j * n + i] = k;
                kval.push(k);
                // dK/dlog ℓ_k = σ² (5/3)(1 + √5 r) e^{−√5 r} (Δ_k/ℓ_k)²
                gfac.push(sf2 * (5.0 / 3.0) * (1.0 + s) * e);
                p += 1;
            }
        }

        let l = cholesky(&gram, n).ok_or(Error::IllConditioned { nugget })?;
        let alpha = cholesky_solve(&l, n, self.y);
        let half_logdet: f64 = (0..n).map(|i| l[i * n + i].ln()).sum();
        let value = -0.5 * dot(self.y, &alpha) - half_logdet - 0.5 * n as f64 * (2.0 * PI).ln();

        let kinv = cholesky_inverse_upper(&l, n);
        let mut grad = vec![0.0; d + 1];
        let mut diag_term = 0.0;
        for i in 0..n {
            diag_term += alpha[i] * alpha[i] - kinv[i * n + i];
        }
        let mut off_sf = 0.0;
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                let w = alpha[i] * alpha[j] - kinv[i * n + j];
                let sq = &self.sq[p * d..(p + 1) * d];
                let wg = w * gfac[p];
                for k in 0..d {
                    grad[k] += wg * sq[k] * inv_l2[k];
                }
                off_sf += w * kval[p];
                p += 1;
            }
        }
        grad[d] = 0.5 * diag_term * sf2 + off_sf;
        Ok((value, grad))
    }
}

/// Log marginal likelihood `−½ yᵀK⁻¹y − ½ log|K| − (n/2) log 2π` with
/// `K = K_f + nugget·I`, and its gradient with respect to the log lengthscales
/// followed by the log signal variance.
pub fn log_marginal_likelihood(
    hyper: &GpHyperparameters,
    x: &[Vec<f64>],
    y: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let d = hyper.lengthscales.len();
    if x.len() != y.len() || x.is_empty() {
        return Err(invalid(format!("{} inputs but {} outputs", x.len(), y.len())));
    }
    if x.iter().any(|row| row.len() != d) {
        return Err(invalid(format!("input rows must have dimension {d}")));
    }
    hyper.validate()?;
    let flat: Vec<f64> = x.iter().flatten().copied().collect();
    let data = LikelihoodData::new(&flat, d, y);
    data.evaluate(&hyper.log_params(), hyper.nugget)
}

/// Dense reference evaluation used by tests: builds K entry by entry from the
/// public kernel and inverts it explicitly.
#[cfg(test)]
pub(crate) fn reference_lml(hyper: &GpHyperparameters, x: &[Vec<f64>], y: &[f64]) -> f64 {
    use nalgebra::{DMatrix, DVector};
    let n = y.len();
    let k = DMatrix::from_fn(n, n, |i, j| {
        super::kernel::matern52_ard(&x[i], &x[j], hyper).unwrap() + if i == j { hyper.nugget } else { 0.0 }
    });
    let det = k.clone().determinant();
    let inv = k.try_inverse().unwrap();
    let yv = DVector::from_column_slice(y);
    -0.5 * (yv.transpose() * inv * &yv)[(0, 0)] - 0.5 * det.ln() - 0.5 * n as f64 * (2.0 * PI).ln()
}

