//! The bank of candidate acquisition functions.
//!
//! Every acquisition is oriented so that larger values are more promising for
//! a minimization problem: EI and PI as usual, and LCB through the score
//! `−(μ − κσ)`. Scores are computed on the GP's standardized output scale, so
//! the EI/PI jitter is expressed in standardized units and all argmax
//! locations are invariant to affine rescaling of the observations.

use crate::error::{invalid, Result};
use crate::gp::GpModel;
use crate::normal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const BANK_SIZE: usize = 7;
pub const DEFAULT_JITTER: f64 = 1e-3;

/// `(ν, δ)` settings of the five LCB members.
pub const LCB_SETTINGS: [(f64, f64); 5] = [(0.5, 0.5), (0.5, 0.05), (5.0, 0.1), (10.0, 0.1), (30.0, 0.1)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AcquisitionKind {
    Ei { jitter: f64 },
    Pi { jitter: f64 },
    Lcb { nu: f64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionSpec {
    /// Stable index into [`bank`].
    pub id: usize,
    #[serde(flatten)]
    pub kind: AcquisitionKind,
}

/// The seven candidates: EI, PI (both with jitter 1e-3) and five LCB variants.
pub fn bank() -> Vec<AcquisitionSpec> {
    let mut specs = vec![
        AcquisitionSpec { id: 0, kind: AcquisitionKind::Ei { jitter: DEFAULT_JITTER } },
        AcquisitionSpec { id: 1, kind: AcquisitionKind::Pi { jitter: DEFAULT_JITTER } },
    ];
    for (i, (nu, delta)) in LCB_SETTINGS.into_iter().enumerate() {
        specs.push(AcquisitionSpec { id: 2 + i, kind: AcquisitionKind::Lcb { nu, delta } });
    }
    specs
}

impl AcquisitionSpec {
    pub fn label(&self) -> String {
        match self.kind {
            AcquisitionKind::Ei { .. } => "EI".into(),
            AcquisitionKind::Pi { .. } => "PI".into(),
            AcquisitionKind::Lcb { nu, delta } => format!("LCB(nu={nu},delta={delta})"),
        }
    }

    pub fn is_lcb(&self) -> bool {
        matches!(self.kind, AcquisitionKind::Lcb { .. })
    }

    /// Score at `x`; `incumbent` is the best observed value in original units.
    pub fn evaluate(&self, model: &GpModel, x: &[f64], iteration: usize, incumbent: f64) -> Result<f64> {
        if x.len() != model.dim() {
            return Err(invalid(format!("query has dimension {}, model {}", x.len(), model.dim())));
        }
        Ok(Acquisition::new(*self, model, iteration, incumbent)?.value(x))
    }
}

/// LCB exploration weight `κ = √(ν τ_i)`, `τ_i = 2 log(i^{d/2+2} π² / (3δ))`.
pub fn kappa(nu: f64, delta: f64, iteration: usize, dim: usize) -> Result<f64> {
    if !(nu > 0.0) || !(delta > 0.0 && delta < 1.0) || iteration < 1 || dim < 1 {
        return Err(invalid(format!(
            "kappa needs nu > 0, 0 < delta < 1, iteration >= 1, dim >= 1 (got {nu}, {delta}, {iteration}, {dim})"
        )));
    }
    let exponent = dim as f64 / 2.0 + 2.0;
    let tau = 2.0 * (exponent * (iteration as f64).ln() + (PI * PI / (3.0 * delta)).ln());
    Ok((nu * tau).sqrt())
}

/// `E[max(incumbent − ξ − Y, 0)]` for `Y ~ N(mean, sd²)`.
pub fn expected_improvement(mean: f64, sd: f64, incumbent: f64, jitter: f64) -> f64 {
    let u = incumbent - jitter - mean;
    if sd <= 1e-12 {
        return u.max(0.0);
    }
    let z = u / sd;
    (u * normal::cdf(z) + sd * normal::pdf(z)).max(0.0)
}

pub fn probability_of_improvement(mean: f64, sd: f64, incumbent: f64, jitter: f64) -> f64 {
    let sd = sd.max(1e-12);
    normal::cdf((incumbent - jitter - mean) / sd)
}

/// Negated lower confidence bound `κσ − μ`.
pub fn lcb_score(mean: f64, sd: f64, kappa: f64) -> f64 {
    kappa * sd - mean
}

/// An acquisition bound to one model, iteration and incumbent.
#[derive(Debug, Clone, Copy)]
pub struct Acquisition<'m> {
    pub spec: AcquisitionSpec,
    model: &'m GpModel,
    incumbent_std: f64,
    kappa: f64,
}

impl<'m> Acquisition<'m> {
    pub fn new(spec: AcquisitionSpec, model: &'m GpModel, iteration: usize, incumbent: f64) -> Result<Self> {
        let kappa = match spec.kind {
            AcquisitionKind::Lcb { nu, delta } => kappa(nu, delta, iteration, model.dim())?,
            _ => 0.0,
        };
        Ok(Self { spec, model, incumbent_std: model.transform().forward(incumbent), kappa })
    }

    pub fn model(&self) -> &'m GpModel {
        self.model
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let (m, v) = self.model.predict_standardized(x);
        self.value_from_moments(m, v)
    }

    /// Score from a standardized posterior mean and variance, so several
    /// acquisitions can share one prediction.
    pub fn value_from_moments(&self, mean: f64, variance: f64) -> f64 {
        let sd = variance.max(0.0).sqrt();
        match self.spec.kind {
            AcquisitionKind::Ei { jitter } => expected_improvement(mean, sd, self.incumbent_std, jitter),
            AcquisitionKind::Pi { jitter } => probability_of_improvement(mean, sd, self.incumbent_std, jitter),
            AcquisitionKind::Lcb { .. } => lcb_score(mean, sd, self.kappa),
        }
    }
}
