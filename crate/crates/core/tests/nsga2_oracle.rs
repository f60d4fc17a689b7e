use dmea::lhs::unit_latin_hypercube;
use dmea::nsga2::{dominates, fast_nondominated_sort, run_nsga2, Nsga2, Nsga2Options, Objectives};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::f64::consts::PI;

fn brute_front0(f: &[Objectives]) -> BTreeSet<usize> {
    (0..f.len())
        .filter(|&i| !(0..f.len()).any(|j| f[j].iter().zip(&f[i]).all(|(a, b)| a <= b) && f[j] != f[i]))
        .collect()
}

#[test]
fn sort_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let n = rng.gen_range(1..=200);
        let f: Vec<Objectives> = (0..n)
            .map(|_| {
                if case % 2 == 0 {
                    [rng.gen(), rng.gen(), rng.gen()]
                } else {
                    [0, 1, 2].map(|_| f64::from(rng.gen_range(0..5)))
                }
            })
            .collect();
        let fronts = fast_nondominated_sort(&f);
        let got: BTreeSet<usize> = fronts[0].iter().copied().collect();
        assert_eq!(got, brute_front0(&f), "case {case}");
        let total: usize = fronts.iter().map(Vec::len).sum();
        assert_eq!(total, n);
        for w in fronts.windows(2) {
            for &b in &w[1] {
                assert!(w[0].iter().any(|&a| dominates(&f[a], &f[b])));
            }
        }
    }
}

/// DTLZ1 with three objectives; the Pareto front is the simplex Σf = 0.5.
fn dtlz1(x: &[f64]) -> Objectives {
    let g = 100.0 * ((x.len() - 2) as f64 + x[2..].iter().map(|v| (v - 0.5).powi(2) - (20.0 * PI * (v - 0.5)).cos()).sum::<f64>());
    let s = 0.5 * (1.0 + g);
    [s * x[0] * x[1], s * x[0] * (1.0 - x[1]), s * (1.0 - x[0])]
}

/// Monte-Carlo hypervolume of `front` inside `[0, r]³`, same samples for every front.
fn hypervolume(front: &[Objectives], r: f64, samples: &[[f64; 3]]) -> f64 {
    let hits = samples.iter().filter(|s| front.iter().any(|f| f.iter().zip(s.iter()).all(|(a, b)| a <= b))).count();
    hits as f64 / samples.len() as f64 * r * r * r
}

#[test]
fn dtlz1_front_quality() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = 4;
    let result = run_nsga2(dtlz1, d, &Nsga2Options::default(), &[], &mut rng);
    assert!(!result.is_empty());
    let mut random_front: Vec<Objectives> = Vec::new();
    for _ in 0..100_000 {
        let f = dtlz1(&(0..d).map(|_| rng.gen()).collect::<Vec<_>>());
        if !random_front.iter().any(|g| dominates(g, &f) || *g == f) {
            random_front.retain(|g| !dominates(&f, g));
            random_front.push(f);
        }
    }
    let r = 1.0;
    let samples: Vec<[f64; 3]> = (0..200_000).map(|_| [rng.gen::<f64>(), rng.gen(), rng.gen()]).collect();
    let hv = hypervolume(&result.pf, r, &samples);
    let hv_random = hypervolume(&random_front, r, &samples);
    assert!(hv_random > 0.0);
    assert!(hv >= 0.95 * hv_random, "nsga2 {hv} vs random search {hv_random}");
}

#[test]
fn elitism_never_loses_the_front() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = Nsga2Options { pop_size: 40, generations: 0, ..Default::default() };
    let mut algo = Nsga2::new(dtlz1, 3, opts, &[], &mut rng);
    let mut checked = 0;
    for _ in 0..30 {
        let before = algo.result();
        algo.step(&mut rng);
        let after = algo.result();
        if algo.population().iter().all(|i| i.rank == 0) {
            // front overflowed the population, crowding truncation may drop members
            continue;
        }
        for f in &before.pf {
            assert!(after.pf.iter().any(|g| g == f || dominates(g, f)));
        }
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn front_and_set_are_aligned() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let injected = unit_latin_hypercube(3, 3, &mut rng);
    let result = run_nsga2(dtlz1, 3, &Nsga2Options { pop_size: 30, generations: 20, ..Default::default() }, &injected, &mut rng);
    assert_eq!(result.pf.len(), result.ps.len());
    for (f, x) in result.pf.iter().zip(&result.ps) {
        assert_eq!(*f, dtlz1(x));
        assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
    }
    for a in &result.pf {
        assert!(!result.pf.iter().any(|b| dominates(b, a)));
    }
}
