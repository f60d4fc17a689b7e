//! Latin hypercube sampling.

use rand::seq::SliceRandom;
use rand::Rng;

/// `n` stratified samples in the unit cube `[0,1]^dim`.
///
/// Along every dimension the `n` values fall one per stratum `[i/n, (i+1)/n)`,
/// uniformly within the stratum; strata are matched across dimensions by
/// independent random permutations.
pub fn unit_latin_hypercube<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; dim]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for j in 0..dim {
        strata.shuffle(rng);
        for (point, &stratum) in points.iter_mut().zip(&strata) {
            let u: f64 = rng.gen();
            // keep the sample strictly below the stratum's upper edge
            point[j] = ((stratum as f64 + u) / n as f64).min(f64::from_bits((1.0f64).to_bits() - 1));
        }
    }
    points
}

/// Latin hypercube over a box given as `(lower, upper)` pairs.
pub fn latin_hypercube<R: Rng + ?Sized>(n: usize, bounds: &[(f64, f64)], rng: &mut R) -> Vec<Vec<f64>> {
    let mut points = unit_latin_hypercube(n, bounds.len(), rng);
    for p in &mut points {
        for (v, &(lo, hi)) in p.iter_mut().zip(bounds) {
            *v = lo + *v * (hi - lo);
        }
    }
    points
}
