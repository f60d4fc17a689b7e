//! ARD Matérn 5/2 covariance.

use super::GpHyperparameters;
use crate::error::{invalid, Result};

pub(crate) const SQRT5: f64 = 2.236_067_977_499_79;

/// Unit-variance Matérn 5/2 correlation as a function of the scaled distance `r`.
#[inline]
pub fn matern52(r: f64) -> f64 {
    let s = SQRT5 * r;
    (1.0 + s + s * s / 3.0) * (-s).exp()
}

/// `σ_f² · m(r)` with `r² = Σ ((x_i − z_i)/ℓ_i)²`.
pub fn matern52_ard(x: &[f64], z: &[f64], hyper: &GpHyperparameters) -> Result<f64> {
    let d = hyper.lengthscales.len();
    if x.len() != d || z.len() != d {
        return Err(invalid(format!(
            "kernel inputs have dimensions {} and {}, hyperparameters expect {d}",
            x.len(),
            z.len()
        )));
    }
    let r = scaled_distance(x, z, &hyper.lengthscales);
    Ok(hyper.signal_variance * matern52(r))
}

#[inline]
pub(crate) fn scaled_distance(x: &[f64], z: &[f64], lengthscales: &[f64]) -> f64 {
    x.iter()
        .zip(z)
        .zip(lengthscales)
        .map(|((a, b), l)| {
            let t = (a - b) / l;
            t * t
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyper(ls: Vec<f64>, sf2: f64) -> GpHyperparameters {
        GpHyperparameters { lengthscales: ls, signal_variance: sf2, nugget: 1e-6 }
    }

    #[test]
    fn zero_distance_gives_signal_variance() {
        let h = hyper(vec![0.3, 0.7], 2.0);
        assert_eq!(matern52_ard(&[0.1, 0.2], &[0.1, 0.2], &h).unwrap(), 2.0);
    }

    #[test]
    fn unit_distance_value() {
        let h = hyper(vec![1.0], 1.0);
        let expected = (1.0 + 5f64.sqrt() + 5.0 / 3.0) * (-(5f64.sqrt())).exp();
        let v = matern52_ard(&[0.0], &[1.0], &h).unwrap();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.52399).abs() < 1e-5);
    }

    #[test]
    fn symmetric_and_bounded() {
        let h = hyper(vec![0.2, 1.5, 0.05], 1.7);
        let x = [0.1, 0.5, 0.9];
        let z = [0.4, 0.45, 0.91];
        let a = matern52_ard(&x, &z, &h).unwrap();
        let b = matern52_ard(&z, &x, &h).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a > 0.0 && a <= 1.7);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let h = hyper(vec![1.0, 1.0], 1.0);
        assert!(matern52_ard(&[0.0], &[1.0, 2.0], &h).is_err());
    }
}
