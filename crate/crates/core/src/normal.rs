//! Standard normal density and distribution function.

use libm::erfc;
use std::f64::consts::{PI, SQRT_2};

pub fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

pub fn cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}
