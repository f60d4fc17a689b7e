//! Synthetic benchmark problems with known global minima.
//!
//! | name            | d | bounds                         | f*                 |
//! |-----------------|---|--------------------------------|--------------------|
//! | SixHumpCamel    | 2 | [-2,2] x [-1,1]                | -1.031628453489877 |
//! | Eggholder       | 2 | [-512,512]^2                   | -959.6406627208506 |
//! | Branin          | 2 | [-5,10] x [0,15]               | 0.397887357729738  |
//! | Ackley2         | 2 | [-32.768,32.768]^2             | 0                  |
//! | Rosenbrock2     | 2 | [-5,10]^2                      | 0                  |
//! | BraninForrester | 2 | [-5,10] x [0,15]               | -16.64402157084319 |
//! | Alpine1         | 5 | [-10,10]^5                     | 0                  |
//! | Hartmann6       | 6 | [0,1]^6                        | -3.322368011415515 |
//!
//! BraninForrester is Branin plus the linear term `5 x1`, which leaves a single
//! global minimum near (-3.689, 13.630).

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Benchmark {
    SixHumpCamel,
    Eggholder,
    Branin,
    Ackley2,
    Rosenbrock2,
    BraninForrester,
    Alpine1,
    Hartmann6,
}

impl Benchmark {
    pub const ALL: [Benchmark; 8] = [
        Benchmark::SixHumpCamel,
        Benchmark::Eggholder,
        Benchmark::Branin,
        Benchmark::Ackley2,
        Benchmark::Rosenbrock2,
        Benchmark::BraninForrester,
        Benchmark::Alpine1,
        Benchmark::Hartmann6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::SixHumpCamel => "SixHumpCamel",
            Benchmark::Eggholder => "Eggholder",
            Benchmark::Branin => "Branin",
            Benchmark::Ackley2 => "Ackley2",
            Benchmark::Rosenbrock2 => "Rosenbrock2",
            Benchmark::BraninForrester => "BraninForrester",
            Benchmark::Alpine1 => "Alpine1",
            Benchmark::Hartmann6 => "Hartmann6",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Benchmark::Alpine1 => 5,
            Benchmark::Hartmann6 => 6,
            _ => 2,
        }
    }

    pub fn bounds(self) -> Vec<(f64, f64)> {
        match self {
            Benchmark::SixHumpCamel => vec![(-2.0, 2.0), (-1.0, 1.0)],
            Benchmark::Eggholder => vec![(-512.0, 512.0); 2],
            Benchmark::Branin | Benchmark::BraninForrester => vec![(-5.0, 10.0), (0.0, 15.0)],
            Benchmark::Ackley2 => vec![(-32.768, 32.768); 2],
            Benchmark::Rosenbrock2 => vec![(-5.0, 10.0); 2],
            Benchmark::Alpine1 => vec![(-10.0, 10.0); 5],
            Benchmark::Hartmann6 => vec![(0.0, 1.0); 6],
        }
    }

    /// Known global minimum value.
    pub fn f_star(self) -> f64 {
        match self {
            Benchmark::SixHumpCamel => -1.031_628_453_489_877,
            Benchmark::Eggholder => -959.640_662_720_850_6,
            Benchmark::Branin => 0.397_887_357_729_738_16,
            Benchmark::Ackley2 | Benchmark::Rosenbrock2 | Benchmark::Alpine1 => 0.0,
            Benchmark::BraninForrester => -16.644_021_570_843_19,
            Benchmark::Hartmann6 => -3.322_368_011_415_515,
        }
    }

    /// A reference global minimizer (one of several for Branin and SixHumpCamel).
    pub fn minimizer(self) -> Vec<f64> {
        match self {
            Benchmark::SixHumpCamel => vec![0.089_842_013_683_013_31, -0.712_656_403_270_413_5],
            Benchmark::Eggholder => vec![512.0, 404.231_805_800_851_2],
            Benchmark::Branin => vec![PI, 2.275],
            Benchmark::Ackley2 => vec![0.0, 0.0],
            Benchmark::Rosenbrock2 => vec![1.0, 1.0],
            Benchmark::BraninForrester => vec![-3.689_285_272_296_118, 13.629_987_729_088_747],
            Benchmark::Alpine1 => vec![0.0; 5],
            Benchmark::Hartmann6 => vec![
                0.201_689_52, 0.150_010_69, 0.476_873_98, 0.275_332_43, 0.311_651_62, 0.657_300_54,
            ],
        }
    }

    /// Evaluates the problem after checking that `x` lies inside the bounds.
    pub fn evaluate(self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(invalid(format!(
                "{} expects {} coordinates, got {}",
                self.name(),
                self.dim(),
                x.len()
            )));
        }
        for (i, (&v, (lo, hi))) in x.iter().zip(self.bounds()).enumerate() {
            let slack = 1e-12 * (hi - lo);
            if !(v >= lo - slack && v <= hi + slack) {
                return Err(invalid(format!("coordinate {i} = {v} outside [{lo}, {hi}]")));
            }
        }
        Ok(self.value(x))
    }

    /// Raw formula, no bounds check.
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Benchmark::SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
            }
            Benchmark::Eggholder => {
                let (a, b) = (x[0], x[1]);
                -(b + 47.0) * (b + a / 2.0 + 47.0).abs().sqrt().sin()
                    - a * (a - (b + 47.0)).abs().sqrt().sin()
            }
            Benchmark::Branin => branin(x[0], x[1]),
            Benchmark::BraninForrester => branin(x[0], x[1]) + 5.0 * x[0],
            Benchmark::Ackley2 => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + std::f64::consts::E
            }
            Benchmark::Rosenbrock2 => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Benchmark::Alpine1 => x.iter().map(|v| (v * v.sin() + 0.1 * v).abs()).sum(),
            Benchmark::Hartmann6 => hartmann6(x),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

fn branin(x1: f64, x2: f64) -> f64 {
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let t = 1.0 / (8.0 * PI);
    (x2 - b * x1 * x1 + c * x1 - 6.0).powi(2) + 10.0 * (1.0 - t) * x1.cos() + 10.0
}

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann6(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..6).map(|j| HARTMANN_A[i][j] * (x[j] - HARTMANN_P[i][j]).powi(2)).sum();
            HARTMANN_ALPHA[i] * (-inner).exp()
        })
        .sum::<f64>()
}
