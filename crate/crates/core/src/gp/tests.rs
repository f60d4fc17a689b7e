use super::likelihood::reference_lml;
use super::*;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect();
    let y = x.iter().map(|p| p.iter().map(|v| (6.0 * v).sin()).sum::<f64>() + 0.1 * rng.gen::<f64>()).collect();
    (x, y)
}

fn random_hyper(rng: &mut ChaCha8Rng, d: usize) -> GpHyperparameters {
    GpHyperparameters {
        lengthscales: (0..d).map(|_| rng.gen_range(0.1..1.0)).collect(),
        signal_variance: rng.gen_range(0.5..2.0),
        nugget: 1e-4,
    }
}

#[test]
fn lml_single_zero_observation() {
    let h = GpHyperparameters { lengthscales: vec![1.0], signal_variance: 1.0 - 1e-6, nugget: 1e-6 };
    let (v, _) = log_marginal_likelihood(&h, &[vec![0.3]], &[0.0]).unwrap();
    assert!((v + 0.5 * (2.0 * std::f64::consts::PI).ln()).abs() < 1e-12);
    assert!((v + 0.91894).abs() < 1e-5);
}

#[test]
fn lml_two_points_matches_dense_formula() {
    let h = GpHyperparameters { lengthscales: vec![0.4, 0.9], signal_variance: 1.3, nugget: 1e-3 };
    let x = vec![vec![0.1, 0.2], vec![0.5, 0.6]];
    let y = [0.7, -0.4];
    let (v, _) = log_marginal_likelihood(&h, &x, &y).unwrap();
    // hand-built 2x2 Gram
    let k12 = 1.3 * matern52(((0.4f64 / 0.4).powi(2) + (0.4f64 / 0.9).powi(2)).sqrt());
    let (a, b) = (1.3 + 1e-3, k12);
    let det = a * a - b * b;
    let quad = (a * y[0] * y[0] - 2.0 * b * y[0] * y[1] + a * y[1] * y[1]) / det;
    let expected = -0.5 * quad - 0.5 * det.ln() - (2.0 * std::f64::consts::PI).ln();
    assert!((v - expected).abs() < 1e-10, "{v} vs {expected}");
    assert!((v - reference_lml(&h, &x, &y)).abs() < 1e-10);
}

#[test]
fn lml_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let d = rng.gen_range(1..4);
        let (x, y) = random_dataset(&mut rng, 10, d);
        let h = random_hyper(&mut rng, d);
        let (_, grad) = log_marginal_likelihood(&h, &x, &y).unwrap();
        let p = h.log_params();
        for k in 0..p.len() {
            let eval = |delta: f64| {
                let mut q = p.clone();
                q[k] += delta;
                log_marginal_likelihood(&GpHyperparameters::from_log_params(&q, h.nugget), &x, &y).unwrap().0
            };
            let fd = (eval(1e-5) - eval(-1e-5)) / 2e-5;
            let rel = (fd - grad[k]).abs() / fd.abs().max(1e-3);
            assert!(rel < 1e-4, "component {k}: analytic {} vs fd {fd}", grad[k]);
        }
    }
}

#[test]
fn ill_conditioned_reports_nugget() {
    let h = GpHyperparameters { lengthscales: vec![1.0], signal_variance: 1.0, nugget: 0.0 };
    let x = vec![vec![0.5], vec![0.5]];
    match log_marginal_likelihood(&h, &x, &[1.0, 1.0]) {
        Err(Error::IllConditioned { nugget }) => assert_eq!(nugget, 0.0),
        other => panic!("expected ill-conditioning, got {other:?}"),
    }
}

#[test]
fn fit_escalates_nugget_on_duplicates() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let x = vec![vec![0.2], vec![0.2], vec![0.2 + 1e-13], vec![0.8]];
    let y = [1.0, 1.0, 1.0, -1.0];
    let model = GpModel::fit(&x, &y, &FitOptions::default(), &mut rng).unwrap();
    assert!(model.hyperparameters().nugget >= DEFAULT_NUGGET);
    assert!(model.predict(&[0.5]).unwrap().variance >= 0.0);
}

/// Draws `n` points from a zero-mean GP prior with lengthscale 0.2 in 1-d.
fn sample_gp(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let x: Vec<Vec<f64>> = (0..n).map(|i| vec![(i as f64 + rng.gen::<f64>()) / n as f64]).collect();
    let h = GpHyperparameters { lengthscales: vec![0.2], signal_variance: 1.0, nugget: 1e-8 };
    let k = DMatrix::from_fn(n, n, |i, j| matern52_ard(&x[i], &x[j], &h).unwrap() + if i == j { 1e-8 } else { 0.0 });
    let l = k.cholesky().unwrap().unpack();
    let z = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
    let y = l * z;
    (x, y.as_slice().to_vec())
}

#[test]
fn fit_recovers_generating_lengthscale() {
    let mut hits = 0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (x, y) = sample_gp(&mut rng, 60);
        let model = GpModel::fit(&x, &y, &FitOptions::default(), &mut rng).unwrap();
        let l = model.hyperparameters().lengthscales[0];
        if (0.1..=0.4).contains(&l) {
            hits += 1;
        }
    }
    assert!(hits >= 18, "only {hits}/20 seeds recovered the lengthscale");
}

#[test]
fn fit_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (x, y) = random_dataset(&mut rng, 15, 2);
    let a = GpModel::fit(&x, &y, &FitOptions::default(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let b = GpModel::fit(&x, &y, &FitOptions::default(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    assert_eq!(a.hyperparameters(), b.hyperparameters());
}

#[test]
fn fit_with_constant_outputs() {
    let x = vec![vec![0.1, 0.1], vec![0.5, 0.9], vec![0.9, 0.3]];
    let y = [3.0; 3];
    let model = GpModel::fit(&x, &y, &FitOptions::default(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(model.transform().scale, 1.0);
    assert_eq!(model.hyperparameters().signal_variance, SIGNAL_VARIANCE_BOUNDS.0);
    let p = model.predict(&[0.4, 0.4]).unwrap();
    assert!((p.mean - 3.0).abs() < 1e-12);
}

#[test]
fn fit_rejects_bad_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(GpModel::fit(&[], &[], &FitOptions::default(), &mut rng).is_err());
    assert!(GpModel::fit(&[vec![0.1], vec![0.2]], &[1.0], &FitOptions::default(), &mut rng).is_err());
    assert!(GpModel::fit(&[vec![0.1], vec![0.2, 0.3]], &[1.0, 2.0], &FitOptions::default(), &mut rng).is_err());
}

#[test]
fn interpolates_training_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (x, y) = random_dataset(&mut rng, 12, 2);
    let model = GpModel::fit(&x, &y, &FitOptions::default(), &mut rng).unwrap();
    let sd = model.transform().scale;
    for (xi, yi) in x.iter().zip(&y) {
        let p = model.predict(xi).unwrap();
        assert!((p.mean - yi).abs() < 1e-2 * sd);
        let (ms, _) = model.predict_standardized(xi);
        let nug = model.hyperparameters().nugget;
        assert!((ms - model.transform().forward(*yi)).abs() < 10.0 * nug.sqrt());
    }
}

#[test]
fn reverts_to_prior_far_from_data() {
    let h = GpHyperparameters { lengthscales: vec![0.05], signal_variance: 1.5, nugget: 1e-6 };
    let model = GpModel::with_hyperparameters(&[vec![0.0], vec![0.02]], &[1.0, 2.0], h).unwrap();
    let p = model.predict(&[0.9]).unwrap();
    let prior = 1.5 * model.transform().scale.powi(2);
    assert!((p.variance - prior).abs() < 0.01 * prior);
    assert!(!p.outside_domain);
    assert!(model.predict(&[1.5]).unwrap().outside_domain);
}

#[test]
fn one_point_posterior_closed_form() {
    let h = GpHyperparameters { lengthscales: vec![0.3, 0.6], signal_variance: 1.7, nugget: 1e-4 };
    let x0 = vec![0.2, 0.4];
    let y0 = 0.7;
    let model = GpModel::with_transform(&[x0.clone()], &[y0], h.clone(), Standardizer::identity()).unwrap();
    let q = [0.5, 0.1];
    let k = matern52_ard(&q, &x0, &h).unwrap();
    let denom = h.signal_variance + h.nugget;
    let p = model.predict(&q).unwrap();
    assert!((p.mean - k * y0 / denom).abs() < 1e-10);
    assert!((p.variance - (h.signal_variance - k * k / denom)).abs() < 1e-10);
}

#[test]
fn mean_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (x, y) = random_dataset(&mut rng, 15, 3);
    let model = GpModel::fit(&x, &y, &FitOptions::default(), &mut rng).unwrap();
    for _ in 0..20 {
        let q: Vec<f64> = (0..3).map(|_| rng.gen()).collect();
        let g = model.predict_mean_gradient(&q).unwrap();
        for p in 0..3 {
            let mut a = q.clone();
            let mut b = q.clone();
            a[p] += 1e-5;
            b[p] -= 1e-5;
            let fd = (model.predict(&a).unwrap().mean - model.predict(&b).unwrap().mean) / 2e-5;
            assert!((fd - g[p]).abs() / fd.abs().max(1e-2) < 1e-4, "fd {fd} vs {}", g[p]);
        }
    }
}

#[test]
fn antisymmetric_pair_has_negative_slope_between() {
    let h = GpHyperparameters { lengthscales: vec![0.3], signal_variance: 1.0, nugget: 1e-6 };
    let model = GpModel::with_hyperparameters(&[vec![0.25], vec![0.75]], &[1.0, -1.0], h).unwrap();
    assert!(model.predict_mean_gradient(&[0.5]).unwrap()[0] < 0.0);
}

#[test]
fn single_center_has_zero_gradient_at_center() {
    let h = GpHyperparameters { lengthscales: vec![0.3, 0.2], signal_variance: 1.0, nugget: 1e-6 };
    let model = GpModel::with_transform(&[vec![0.4, 0.6]], &[2.0], h, Standardizer::identity()).unwrap();
    assert_eq!(model.predict_mean_gradient(&[0.4, 0.6]).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn adding_query_point_never_increases_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.gen_range(2..8);
        let x: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen()]).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let h = GpHyperparameters { lengthscales: vec![0.2], signal_variance: 1.0, nugget: 1e-6 };
        let q = vec![rng.gen::<f64>()];
        let t = Standardizer::identity();
        let before = GpModel::with_transform(&x, &y, h.clone(), t).unwrap().predict(&q).unwrap().variance;
        let mut x2 = x.clone();
        x2.push(q.clone());
        let mut y2 = y.clone();
        y2.push(0.5);
        let after = GpModel::with_transform(&x2, &y2, h, t).unwrap().predict(&q).unwrap().variance;
        assert!(after <= before + 1e-12);
    }
}

#[test]
fn standardizer_round_trip() {
    let y = [3.5, -2.0, 1e3, 0.125, 7.0];
    let t = Standardizer::fit(&y);
    for v in y {
        assert!((t.inverse(t.forward(v)) - v).abs() < 1e-12);
    }
    let z: Vec<f64> = y.iter().map(|v| t.forward(*v)).collect();
    assert!(z.iter().sum::<f64>().abs() < 1e-12);
}
