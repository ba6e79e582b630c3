//! Closed-form quantities of the static gamma-feedback model.
//!
//! A price move `ΔS/S` is normalized by the stock's beta and the market
//! volatility into a surprise `x`, which scales hedging intensity through
//! `φ(x) = 1 + k·x`. With total gamma exposure `G = N·Γ` and impact
//! coefficient `λ`, the one-period response to a shock `μS` is `μS / D`
//! where `D = 1 − λ·G·φ(x)` is the stability denominator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stability denominators at or below this value are treated as singular.
pub const EPS_SINGULAR: f64 = 1e-9;

/// Structural parameters shared by every static and dynamic computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    /// Price-impact coefficient.
    pub lambda: f64,
    pub beta: f64,
    /// Market volatility per period.
    pub sigma_m: f64,
    /// Initial option position (contracts).
    pub n0: f64,
    /// Gamma per contract.
    pub gamma0: f64,
    /// Initial shock rate.
    pub mu0: f64,
    /// Slope of the surprise amplification `φ(x) = 1 + k·x`.
    pub k: f64,
    /// Steepness of the tanh impact. Small enough by default that the
    /// feedback stays off the `tanh = 1.0` plateau at the reference exposure.
    pub c: f64,
    /// Position-decay scale. Zero disables decay.
    pub eta: f64,
    /// Position-decay exponent.
    pub xi: f64,
    /// Initial price.
    pub s0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            lambda: 0.05,
            beta: 1.0,
            sigma_m: 0.03,
            n0: 200.0,
            gamma0: 1.0,
            mu0: 0.025,
            k: 2.0,
            c: 0.01,
            eta: 2.0,
            xi: 5.0,
            s0: 100.0,
        }
    }
}

fn check(field: &'static str, value: f64, ok: bool, constraint: &'static str) -> Result<()> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(Error::domain(field, value, constraint))
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        check("lambda", self.lambda, true, "must be finite")?;
        check("beta", self.beta, self.beta > 0.0, "must be > 0")?;
        check("sigma_m", self.sigma_m, self.sigma_m > 0.0, "must be > 0")?;
        check("n0", self.n0, self.n0 > 0.0, "must be > 0")?;
        check("gamma0", self.gamma0, self.gamma0 > 0.0, "must be > 0")?;
        check("mu0", self.mu0, true, "must be finite")?;
        check("k", self.k, self.k >= 0.0, "must be >= 0")?;
        check("c", self.c, self.c > 0.0, "must be > 0")?;
        check("eta", self.eta, self.eta >= 0.0, "must be >= 0")?;
        check("xi", self.xi, self.xi > 0.0, "must be > 0")?;
        check("s0", self.s0, self.s0 > 0.0, "must be > 0")?;
        Ok(())
    }

    /// Total gamma exposure `G = n0 · gamma0`.
    pub fn exposure(&self) -> f64 {
        self.n0 * self.gamma0
    }

    /// Same parameters with total exposure `g` carried entirely by the position (`gamma0 = 1`).
    pub fn with_exposure(self, g: f64) -> Self {
        ModelParams {
            n0: g,
            gamma0: 1.0,
            ..self
        }
    }
}

/// Shape of the hedging impact function `I(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Impact {
    Linear,
    /// `y` clipped to `[-i_max, i_max]`.
    Clamp {
        i_max: f64,
    },
    /// `tanh(c·y)`.
    Tanh {
        c: f64,
    },
}

impl Default for Impact {
    fn default() -> Self {
        Impact::Tanh {
            c: ModelParams::default().c,
        }
    }
}

impl Impact {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Impact::Linear => Ok(()),
            Impact::Clamp { i_max } => check("i_max", i_max, i_max > 0.0, "must be > 0"),
            Impact::Tanh { c } => check("c", c, c > 0.0, "must be > 0"),
        }
    }

    pub fn apply(&self, y: f64) -> f64 {
        match *self {
            Impact::Linear => y,
            Impact::Clamp { i_max } => y.clamp(-i_max, i_max),
            Impact::Tanh { c } => (c * y).tanh(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Impact::Linear => "linear",
            Impact::Clamp { .. } => "clamp",
            Impact::Tanh { .. } => "tanh",
        }
    }
}

/// Beta-normalized surprise `|ΔS/S| / (β·σ_m)`.
pub fn relative_surprise(delta_s: f64, s: f64, beta: f64, sigma_m: f64) -> Result<f64> {
    check("s", s, s > 0.0, "must be > 0")?;
    check("beta", beta, beta > 0.0, "must be > 0")?;
    check("sigma_m", sigma_m, sigma_m > 0.0, "must be > 0")?;
    Ok((delta_s / s).abs() / (beta * sigma_m))
}

/// Surprise amplification `1 + k·x`, defined for `x >= 0`.
pub fn phi(x: f64, k: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", x, "must be >= 0"));
    }
    Ok(1.0 + k * x)
}

/// `D = 1 − λ·G·φ(x)` with `x` evaluated at the exogenous `shock_ratio`.
pub fn stability_denominator(params: &ModelParams, shock_ratio: f64) -> Result<f64> {
    params.validate()?;
    denominator_at(
        params.lambda,
        params.exposure(),
        params.beta,
        params.sigma_m,
        params.k,
        shock_ratio,
    )
}

/// `D` for an explicit total exposure `g` (which may be zero).
pub fn denominator_at(
    lambda: f64,
    g: f64,
    beta: f64,
    sigma_m: f64,
    k: f64,
    shock_ratio: f64,
) -> Result<f64> {
    if !(shock_ratio >= 0.0) {
        return Err(Error::domain("shock_ratio", shock_ratio, "must be >= 0"));
    }
    check("g", g, g >= 0.0, "must be >= 0")?;
    check("beta", beta, beta > 0.0, "must be > 0")?;
    check("sigma_m", sigma_m, sigma_m > 0.0, "must be > 0")?;
    let x = shock_ratio / (beta * sigma_m);
    Ok(1.0 - lambda * g * phi(x, k)?)
}

/// Closed-form one-period response `shock_ratio · s / D`.
pub fn static_response(params: &ModelParams, shock_ratio: f64, s: f64) -> Result<f64> {
    static_response_with_surprise(params, shock_ratio, shock_ratio, s)
}

/// Static response where the surprise feeding `D` is evaluated at `surprise_ratio`
/// (the fixed grid shock) while the drift uses `shock_ratio`.
pub fn static_response_with_surprise(
    params: &ModelParams,
    shock_ratio: f64,
    surprise_ratio: f64,
    s: f64,
) -> Result<f64> {
    check("s", s, s > 0.0, "must be > 0")?;
    check("shock_ratio", shock_ratio, true, "must be finite")?;
    let d = stability_denominator(params, surprise_ratio)?;
    if d <= EPS_SINGULAR {
        return Err(Error::SingularDenominator { denominator: d });
    }
    Ok(shock_ratio * s / d)
}
