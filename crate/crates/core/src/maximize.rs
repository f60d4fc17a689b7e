//! Derivative-free multistart maximization over the unit cube.
//!
//! Starting points (a Latin hypercube plus caller-supplied seeds such as the
//! archive) are screened with one evaluation each; the best few are refined
//! by coordinate-wise pattern search.

use crate::lhs::unit_latin_hypercube;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct MaximizeOptions {
    /// Latin hypercube starts; `None` means `10·d`.
    pub lhs_starts: Option<usize>,
    /// How many of the best screened starts get a local refinement.
    pub refinements: usize,
    /// Evaluation budget per refinement; `None` means `200·d`.
    pub local_budget: Option<usize>,
    /// Initial pattern-search step in unit-cube coordinates.
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self { lhs_starts: None, refinements: 5, local_budget: None, initial_step: 0.1, min_step: 1e-7 }
    }
}

impl MaximizeOptions {
    pub fn start_count(&self, dim: usize) -> usize {
        self.lhs_starts.unwrap_or(10 * dim)
    }

    pub fn budget(&self, dim: usize) -> usize {
        self.local_budget.unwrap_or(200 * dim)
    }
}

/// Latin hypercube starts followed by `seeds` clamped into the cube.
pub fn start_points<R: Rng + ?Sized>(dim: usize, seeds: &[Vec<f64>], options: &MaximizeOptions, rng: &mut R) -> Vec<Vec<f64>> {
    let mut starts = unit_latin_hypercube(options.start_count(dim), dim, rng);
    starts.extend(seeds.iter().map(|s| s.iter().map(|v| v.clamp(0.0, 1.0)).collect()));
    starts
}

/// Maximizes `objective` over `[0,1]^dim`, drawing Latin hypercube starts from
/// `rng` and adding `seeds`.
pub fn maximize<F, R>(objective: F, dim: usize, seeds: &[Vec<f64>], options: &MaximizeOptions, rng: &mut R) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let starts = start_points(dim, seeds, options, rng);
    maximize_from(objective, &starts, options)
}

/// Maximizes from an explicit set of starting points (at least one).
pub fn maximize_from<F>(objective: F, starts: &[Vec<f64>], options: &MaximizeOptions) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    assert!(!starts.is_empty(), "at least one start is required");
    let score = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut screened: Vec<(usize, f64)> = starts.iter().enumerate().map(|(i, s)| (i, score(s))).collect();
    // stable: ties keep start order
    screened.sort_by(|a, b| b.1.total_cmp(&a.1));

    let dim = starts[0].len();
    let budget = options.budget(dim);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for &(i, v) in screened.iter().take(options.refinements.max(1)) {
        let (x, fx) = pattern_search(&score, starts[i].clone(), v, budget, options);
        if best.as_ref().map_or(true, |(_, b)| fx > *b) {
            best = Some((x, fx));
        }
    }
    best.expect("at least one refinement")
}

fn pattern_search<F>(f: &F, mut x: Vec<f64>, mut fx: f64, budget: usize, options: &MaximizeOptions) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut step = options.initial_step;
    let mut evals = 0;
    while evals < budget && step > options.min_step {
        let mut improved = false;
        'coords: for p in 0..x.len() {
            for sign in [1.0, -1.0] {
                let moved = (x[p] + sign * step).clamp(0.0, 1.0);
                if moved == x[p] {
                    continue;
                }
                let old = x[p];
                x[p] = moved;
                let fc = f(&x);
                evals += 1;
                if fc > fx {
                    fx = fc;
                    improved = true;
                    break;
                }
                x[p] = old;
                if evals >= budget {
                    break 'coords;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}
