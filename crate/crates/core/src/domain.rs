//! Problem abstraction and the box-to-unit-cube mapping.

use crate::benchmarks::Benchmark;
use crate::error::{invalid, Result};
use rand::Rng;

/// An expensive black-box objective to be minimized over a box.
pub trait BlackBox: Sync {
    fn name(&self) -> String;
    fn bounds(&self) -> Vec<(f64, f64)>;
    fn evaluate(&self, x: &[f64]) -> f64;

    fn dim(&self) -> usize {
        self.bounds().len()
    }
}

impl BlackBox for Benchmark {
    fn name(&self) -> String {
        Benchmark::name(*self).to_string()
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        Benchmark::bounds(*self)
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.value(x)
    }
}

/// A closure-backed black box.
pub struct FnProblem<F> {
    pub name: String,
    pub bounds: Vec<(f64, f64)>,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> BlackBox for FnProblem<F> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        self.bounds.clone()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Affine map between a box and the unit cube.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    bounds: Vec<(f64, f64)>,
}

impl Domain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(invalid("a domain needs at least one dimension"));
        }
        if bounds.iter().any(|(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(invalid("every bound must satisfy lower < upper"));
        }
        Ok(Self { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.bounds).map(|(v, (lo, hi))| (v - lo) / (hi - lo)).collect()
    }

    /// Maps back to the box, clamping so results never leave the bounds.
    pub fn from_unit(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.bounds)
            .map(|(v, (lo, hi))| (lo + v.clamp(0.0, 1.0) * (hi - lo)).clamp(*lo, *hi))
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }
}

pub(crate) fn random_unit_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.gen::<f64>()).collect()
}
