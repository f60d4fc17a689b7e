//! Real-coded NSGA-II for three-objective minimization over the unit cube.

use crate::lhs::unit_latin_hypercube;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

pub type Objectives = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nsga2Options {
    pub pop_size: usize,
    pub generations: usize,
    pub variation: VariationParams,
}

impl Default for Nsga2Options {
    fn default() -> Self {
        Self { pop_size: 100, generations: 100, variation: VariationParams::default() }
    }
}

/// SBX crossover and polynomial mutation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationParams {
    pub eta_c: f64,
    pub eta_m: f64,
    pub p_crossover: f64,
    /// Per-coordinate mutation probability; `None` means `1/d`.
    pub p_mutation: Option<f64>,
}

impl Default for VariationParams {
    fn default() -> Self {
        Self { eta_c: 15.0, eta_m: 20.0, p_crossover: 0.9, p_mutation: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Vec<f64>,
    pub objectives: Objectives,
    pub rank: usize,
    pub crowding: f64,
}

/// Final non-dominated set: objective vectors `pf` and their genomes `ps`, index-aligned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoResult {
    pub pf: Vec<Objectives>,
    pub ps: Vec<Vec<f64>>,
}

impl ParetoResult {
    pub fn len(&self) -> usize {
        self.pf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pf.is_empty()
    }
}

/// `a` dominates `b` under minimization.
pub fn dominates(a: &Objectives, b: &Objectives) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Partitions indices into successive non-dominated fronts.
pub fn fast_nondominated_sort(objectives: &[Objectives]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in p + 1..n {
            if dominates(&objectives[p], &objectives[q]) {
                dominated_by[p].push(q);
                count[q] += 1;
            } else if dominates(&objectives[q], &objectives[p]) {
                dominated_by[q].push(p);
                count[p] += 1;
            }
        }
    }
    for p in 0..n {
        if count[p] == 0 {
            fronts[0].push(p);
        }
    }
    let mut i = 0;
    while !fronts[i].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[i] {
            for &q in &dominated_by[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        i += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of one front.
pub fn crowding_distance(front: &[Objectives]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..3 {
        order.sort_by(|&a, &b| front[a][m].total_cmp(&front[b][m]));
        let (lo, hi) = (front[order[0]][m], front[order[n - 1]][m]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if !(range > 0.0) || !range.is_finite() {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (front[order[w + 1]][m] - front[order[w - 1]][m]) / range;
            }
        }
    }
    dist
}

/// Simulated binary crossover (with probability `p_crossover`) followed by
/// polynomial mutation; offspring stay in the unit cube.
pub fn variation<R: Rng + ?Sized>(
    parents: (&[f64], &[f64]),
    params: &VariationParams,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let (mut c1, mut c2) = (parents.0.to_vec(), parents.1.to_vec());
    if rng.gen::<f64>() < params.p_crossover {
        sbx(&mut c1, &mut c2, params.eta_c, rng);
    }
    let p_mut = params.p_mutation.unwrap_or(1.0 / c1.len().max(1) as f64);
    polynomial_mutation(&mut c1, params.eta_m, p_mut, rng);
    polynomial_mutation(&mut c2, params.eta_m, p_mut, rng);
    (c1, c2)
}

fn sbx<R: Rng + ?Sized>(c1: &mut [f64], c2: &mut [f64], eta: f64, rng: &mut R) {
    for i in 0..c1.len() {
        if rng.gen::<f64>() > 0.5 {
            continue;
        }
        let (x1, x2) = (c1[i], c2[i]);
        if (x1 - x2).abs() < 1e-14 {
            continue;
        }
        let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
        let u: f64 = rng.gen();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let bq1 = spread(1.0 + 2.0 * y1 / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (1.0 - y2) / (y2 - y1));
        let a = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(0.0, 1.0);
        let b = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(0.0, 1.0);
        if rng.gen::<f64>() < 0.5 {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
}

fn polynomial_mutation<R: Rng + ?Sized>(x: &mut [f64], eta: f64, p: f64, rng: &mut R) {
    let pow = 1.0 / (eta + 1.0);
    for v in x.iter_mut() {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let (d1, d2) = (*v, 1.0 - *v);
        let u: f64 = rng.gen();
        let dq = if u < 0.5 {
            let val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            val.powf(pow) - 1.0
        } else {
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(pow)
        };
        *v = (*v + dq).clamp(0.0, 1.0);
    }
}

/// Generational state of one NSGA-II run.
pub struct Nsga2<F> {
    objective: F,
    options: Nsga2Options,
    population: Vec<Individual>,
}

impl<F: Fn(&[f64]) -> Objectives> Nsga2<F> {
    /// Latin hypercube initial population; `injected` genomes (clamped to the
    /// cube) replace its last members.
    pub fn new<R: Rng + ?Sized>(objective: F, dim: usize, options: Nsga2Options, injected: &[Vec<f64>], rng: &mut R) -> Self {
        let pop_size = options.pop_size.max(2);
        let mut genomes = unit_latin_hypercube(pop_size, dim, rng);
        for (slot, g) in genomes.iter_mut().rev().zip(injected) {
            *slot = g.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        }
        let mut this = Self { objective, options, population: Vec::new() };
        let population = genomes.into_iter().map(|g| this.individual(g)).collect();
        this.population = this.survivors(population, pop_size);
        this
    }

    fn individual(&self, genome: Vec<f64>) -> Individual {
        let mut objectives = (self.objective)(&genome);
        for v in &mut objectives {
            if v.is_nan() {
                *v = f64::INFINITY;
            }
        }
        Individual { genome, objectives, rank: 0, crowding: 0.0 }
    }

    /// Non-dominated sorting plus crowding truncation to `size` members.
    fn survivors(&self, mut pool: Vec<Individual>, size: usize) -> Vec<Individual> {
        let objs: Vec<Objectives> = pool.iter().map(|i| i.objectives).collect();
        let fronts = fast_nondominated_sort(&objs);
        let mut keep: Vec<usize> = Vec::with_capacity(size);
        for (rank, front) in fronts.iter().enumerate() {
            let fobjs: Vec<Objectives> = front.iter().map(|&i| objs[i]).collect();
            let cd = crowding_distance(&fobjs);
            for (&i, &c) in front.iter().zip(&cd) {
                pool[i].rank = rank;
                pool[i].crowding = c;
            }
            if keep.len() + front.len() <= size {
                keep.extend(front);
            } else {
                let mut order: Vec<usize> = (0..front.len()).collect();
                order.sort_by(|&a, &b| cd[b].total_cmp(&cd[a]));
                keep.extend(order.into_iter().take(size - keep.len()).map(|j| front[j]));
            }
            if keep.len() == size {
                break;
            }
        }
        let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
        keep.into_iter().map(|i| slots[i].take().expect("unique index")).collect()
    }

    fn tournament<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let a = rng.gen_range(0..self.population.len());
        let b = rng.gen_range(0..self.population.len());
        let (ia, ib) = (&self.population[a], &self.population[b]);
        match ia.rank.cmp(&ib.rank) {
            Ordering::Less => a,
            Ordering::Greater => b,
            Ordering::Equal => {
                if ib.crowding > ia.crowding {
                    b
                } else {
                    a
                }
            }
        }
    }

    /// One generation: tournament selection, variation, elitist survival.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let size = self.population.len();
        let mut offspring = Vec::with_capacity(size);
        while offspring.len() < size {
            let a = self.tournament(rng);
            let b = self.tournament(rng);
            let (c1, c2) = variation(
                (&self.population[a].genome, &self.population[b].genome),
                &self.options.variation,
                rng,
            );
            offspring.push(self.individual(c1));
            if offspring.len() < size {
                offspring.push(self.individual(c2));
            }
        }
        let mut pool = std::mem::take(&mut self.population);
        pool.extend(offspring);
        self.population = self.survivors(pool, size);
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    /// Rank-0 members with near-duplicate genomes (distance < 1e-9) removed.
    pub fn result(&self) -> ParetoResult {
        let mut pf = Vec::new();
        let mut ps: Vec<Vec<f64>> = Vec::new();
        for ind in self.population.iter().filter(|i| i.rank == 0) {
            if ps.iter().any(|g| distance(g, &ind.genome) < 1e-9) {
                continue;
            }
            pf.push(ind.objectives);
            ps.push(ind.genome.clone());
        }
        ParetoResult { pf, ps }
    }
}

/// Runs NSGA-II and returns the final non-dominated set.
pub fn run_nsga2<F, R>(objective: F, dim: usize, options: &Nsga2Options, injected: &[Vec<f64>], rng: &mut R) -> ParetoResult
where
    F: Fn(&[f64]) -> Objectives,
    R: Rng + ?Sized,
{
    let mut ga = Nsga2::new(objective, dim, *options, injected, rng);
    for _ in 0..options.generations {
        ga.step(rng);
    }
    ga.result()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sort_small_cases() {
        assert_eq!(fast_nondominated_sort(&[[1.0, 1.0, 1.0], [2.0, 2.0, 2.0]]), vec![vec![0], vec![1]]);
        assert_eq!(
            fast_nondominated_sort(&[[1.0, 2.0, 3.0], [3.0, 2.0, 1.0], [2.0, 2.0, 2.0]]),
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn crowding_cases() {
        assert_eq!(crowding_distance(&[[0.0, 1.0, 2.0], [1.0, 0.0, 2.0]]), vec![f64::INFINITY; 2]);
        let d = crowding_distance(&[[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 2.0, 2.0]]);
        assert_eq!(d[1], 3.0);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        let dup = crowding_distance(&[[1.0, 1.0, 1.0]; 4]);
        assert_eq!(dup.iter().filter(|v| v.is_finite()).count(), 2);
        assert!(dup.iter().all(|v| !v.is_nan() && *v >= 0.0));
    }

    #[test]
    fn identical_parents_without_mutation_are_fixed() {
        let p = vec![0.2, 0.7, 0.4];
        let params = VariationParams { p_mutation: Some(0.0), p_crossover: 1.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let (a, b) = variation((&p, &p), &params, &mut rng);
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn full_mutation_changes_offspring() {
        let params = VariationParams { p_mutation: Some(1.0), eta_m: 20.0, ..Default::default() };
        let mut changed = 0;
        for seed in 0..1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p1: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
            let p2: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
            let (a, b) = variation((&p1, &p2), &params, &mut rng);
            if a != p1 && a != p2 && b != p1 && b != p2 {
                changed += 1;
            }
        }
        assert!(changed >= 990, "{changed}");
    }

    #[test]
    fn offspring_stay_in_cube() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = VariationParams { p_mutation: Some(0.5), ..Default::default() };
        for _ in 0..10_000 {
            let p1: Vec<f64> = (0..4).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen() }).collect();
            let p2: Vec<f64> = (0..4).map(|_| if rng.gen_bool(0.3) { 1.0 } else { rng.gen() }).collect();
            let (a, b) = variation((&p1, &p2), &params, &mut rng);
            assert!(a.iter().chain(&b).all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn aligned_objectives_collapse() {
        let f = |x: &[f64]| [x[0], x[0], x[0]];
        let opts = Nsga2Options { pop_size: 40, generations: 30, ..Default::default() };
        let r = run_nsga2(f, 1, &opts, &[], &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(r.len(), 1);
        assert!(r.ps[0][0] < 1e-3);
    }

    #[test]
    fn injected_genome_enters_population() {
        let f = |x: &[f64]| [x[0], 1.0 - x[0], x[1]];
        let opts = Nsga2Options { pop_size: 10, generations: 0, ..Default::default() };
        let ga = Nsga2::new(f, 2, opts, &[vec![0.123, 0.0]], &mut ChaCha8Rng::seed_from_u64(0));
        assert!(ga.population().iter().any(|i| i.genome == vec![0.123, 0.0]));
    }
}
