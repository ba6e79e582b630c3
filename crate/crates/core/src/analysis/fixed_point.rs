use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{phi, Impact, ModelParams, EPS_SINGULAR};

use super::grid::GridSpec;

/// Absolute tolerance on `|f| − 1` for boundary classification.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    /// `f = −1`: period-doubling boundary.
    FlipBoundary,
    /// `f = 1`: unit root, the squeeze boundary.
    BlowupBoundary,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::FlipBoundary => "flip_boundary",
            Stability::BlowupBoundary => "blowup_boundary",
        }
    }
}

/// Fixed point and stability of the affine map `ΔS ↦ a + f·ΔS`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub a: f64,
    pub f: f64,
    /// `a / (1 − f)`, or `None` when `1 − f` is singular.
    pub fixed_point: Option<f64>,
    pub classification: Stability,
}

pub fn analyze_fixed_point(a: f64, f: f64) -> FixedPointReport {
    let gap = 1.0 - f;
    let fixed_point = (gap.abs() > EPS_SINGULAR).then(|| a / gap);
    let classification = if (f + 1.0).abs() <= CLASSIFY_TOL {
        Stability::FlipBoundary
    } else if (f - 1.0).abs() <= CLASSIFY_TOL {
        Stability::BlowupBoundary
    } else if f.abs() < 1.0 {
        Stability::Stable
    } else {
        Stability::Unstable
    };
    FixedPointReport {
        a,
        f,
        fixed_point,
        classification,
    }
}

/// Feedback eigenvalue at `ΔS = 0`: `I(λ·N₀·Γ₀)`, using `φ(0) = 1`.
pub fn linearized_feedback(params: &ModelParams, impact: &Impact) -> f64 {
    impact.apply(params.lambda * params.n0 * params.gamma0)
}

/// Critical exposure `G* = 1 / (λ·φ(x))` where `D` vanishes.
pub fn bifurcation_surface(
    lambda: f64,
    beta: f64,
    shock_ratio: f64,
    sigma_m: f64,
    k: f64,
) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("lambda", lambda, "must be > 0"));
    }
    let x = crate::model::relative_surprise(shock_ratio, 1.0, beta, sigma_m)?;
    let phi_x = phi(x, k)?;
    if !(phi_x > 0.0) {
        return Err(Error::domain("phi", phi_x, "must be > 0"));
    }
    Ok(1.0 / (lambda * phi_x))
}

/// Root curve `G*(β)` sampled on the β axis of `spec`.
pub fn bifurcation_curve(spec: &GridSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    (0..spec.n_beta)
        .map(|i| {
            let beta = spec.beta_at(i);
            bifurcation_surface(spec.lambda, beta, spec.shock_ratio, spec.sigma_m, spec.k)
                .map(|g| (beta, g))
        })
        .collect()
}
