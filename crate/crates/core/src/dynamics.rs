//! Deterministic hedging-feedback time evolution.
//!
//! Each recursive step applies, in this order:
//!
//! 1. price: `ΔS_{t+1} = μ_t·S_t + I(λ·N_eff·Γ₀·φ(x_t))·ΔS_t`, with `x_t` the surprise of the
//!    last observed move;
//! 2. cumulative movement: `m += |ΔS_{t+1} / S_t|` (pre-move price);
//! 3. position decay: `N = N₀ / (1 + η·m^ξ)`;
//! 4. shock decay: `μ = μ₀·N/N₀`.
//!
//! The one-shot engine instead applies a single round of hedging to the
//! shock-induced move, `ΔS₁ = μ₀S₀·(1 + I(λ·N₀·Γ₀·φ(x)))`, and holds the price
//! afterwards.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{phi, relative_surprise, Impact, ModelParams};

/// Prices beyond `OVERFLOW_FACTOR · s0` abort the run.
pub const OVERFLOW_FACTOR: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimState {
    pub t: usize,
    pub s: f64,
    /// Observed move `S_t − S_{t−1}`.
    pub ds_obs: f64,
    /// `Σ |ΔS_τ / S_τ|` up to and including this step.
    pub m_cum: f64,
    pub n_t: f64,
    pub mu_t: f64,
    /// Exposure deviation added on top of `n_t` (zero in deterministic runs).
    pub nu_t: f64,
}

impl SimState {
    /// State at `t = 0`: price `s0`, no observed move, full position and shock.
    pub fn initial(params: &ModelParams) -> Self {
        SimState {
            t: 0,
            s: params.s0,
            ds_obs: 0.0,
            m_cum: 0.0,
            n_t: params.n0,
            mu_t: params.mu0,
            nu_t: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    OneShot,
    Recursive,
    Stochastic,
    EventDriven,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::OneShot => "one_shot",
            Mode::Recursive => "recursive",
            Mode::Stochastic => "stochastic",
            Mode::EventDriven => "event_driven",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    pub impact: Impact,
    pub states: Vec<SimState>,
    pub seed: Option<u64>,
    pub mode: Mode,
}

impl Trajectory {
    pub fn prices(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.s).collect()
    }

    pub fn last(&self) -> &SimState {
        self.states
            .last()
            .expect("trajectory has at least the initial state")
    }

    /// Number of steps taken (states minus the initial one).
    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }
}

/// `N₀ / (1 + η·m^ξ)`.
pub fn position_decay(n0: f64, m_cum: f64, eta: f64, xi: f64) -> Result<f64> {
    if !(m_cum >= 0.0) {
        return Err(Error::domain("m_cum", m_cum, "must be >= 0"));
    }
    Ok(n0 / (1.0 + eta * m_cum.powf(xi)))
}

/// `μ₀·N_t/N₀`.
pub fn shock_decay(mu0: f64, n_t: f64, n0: f64) -> Result<f64> {
    if !(n0 > 0.0) {
        return Err(Error::domain("n0", n0, "must be > 0"));
    }
    if !(n_t >= 0.0) {
        return Err(Error::domain("n_t", n_t, "must be >= 0"));
    }
    Ok(mu0 * n_t / n0)
}

/// Advances one step. `exposure_override` replaces `state.n_t` in the feedback term only.
pub fn step_recursive(
    state: &SimState,
    params: &ModelParams,
    impact: &Impact,
    exposure_override: Option<f64>,
) -> Result<SimState> {
    let x = relative_surprise(state.ds_obs, state.s, params.beta, params.sigma_m)?;
    let exposure = exposure_override.unwrap_or(state.n_t);
    let feedback = impact.apply(params.lambda * exposure * params.gamma0 * phi(x, params.k)?);
    let ds_next = state.mu_t * state.s + feedback * state.ds_obs;
    let s_next = state.s + ds_next;
    let limit = OVERFLOW_FACTOR * params.s0;
    if !s_next.is_finite() || s_next.abs() > limit {
        return Err(Error::NumericalOverflow {
            step: state.t + 1,
            price: s_next,
            limit,
        });
    }
    let m_cum = state.m_cum + (ds_next / state.s).abs();
    let n_t = position_decay(params.n0, m_cum, params.eta, params.xi)?;
    let mu_t = shock_decay(params.mu0, n_t, params.n0)?;
    Ok(SimState {
        t: state.t + 1,
        s: s_next,
        ds_obs: ds_next,
        m_cum,
        n_t,
        mu_t,
        nu_t: state.nu_t,
    })
}

fn check_run(params: &ModelParams, impact: &Impact, horizon: usize) -> Result<()> {
    params.validate()?;
    impact.validate()?;
    if horizon < 1 {
        return Err(Error::domain("horizon", horizon as f64, "must be >= 1"));
    }
    Ok(())
}

/// Recursive feedback with position decay from the standard initial state.
pub fn simulate_recursive(
    params: &ModelParams,
    impact: &Impact,
    horizon: usize,
) -> Result<Trajectory> {
    simulate_recursive_from(SimState::initial(params), params, impact, horizon)
}

/// Recursive feedback starting from an arbitrary state.
pub fn simulate_recursive_from(
    initial: SimState,
    params: &ModelParams,
    impact: &Impact,
    horizon: usize,
) -> Result<Trajectory> {
    check_run(params, impact, horizon)?;
    let mut states = Vec::with_capacity(horizon + 1);
    states.push(initial);
    for _ in 0..horizon {
        let next = step_recursive(states.last().unwrap(), params, impact, None)?;
        states.push(next);
    }
    Ok(Trajectory {
        params: *params,
        impact: *impact,
        states,
        seed: None,
        mode: Mode::Recursive,
    })
}

/// Shock at `t = 0` only, one round of hedging on the induced move, no decay.
pub fn simulate_one_shot(
    params: &ModelParams,
    impact: &Impact,
    horizon: usize,
) -> Result<Trajectory> {
    check_run(params, impact, horizon)?;
    let s0 = params.s0;
    let shock_move = params.mu0 * s0;
    let x = relative_surprise(shock_move, s0, params.beta, params.sigma_m)?;
    let feedback = impact.apply(params.lambda * params.n0 * params.gamma0 * phi(x, params.k)?);
    let ds1 = shock_move + feedback * shock_move;
    let s1 = s0 + ds1;
    if !s1.is_finite() || s1.abs() > OVERFLOW_FACTOR * s0 {
        return Err(Error::NumericalOverflow {
            step: 1,
            price: s1,
            limit: OVERFLOW_FACTOR * s0,
        });
    }

    let mut states = Vec::with_capacity(horizon + 1);
    states.push(SimState::initial(params));
    let jumped = SimState {
        t: 1,
        s: s1,
        ds_obs: ds1,
        m_cum: (ds1 / s0).abs(),
        n_t: params.n0,
        mu_t: 0.0,
        nu_t: 0.0,
    };
    states.push(jumped);
    for t in 2..=horizon {
        states.push(SimState {
            t,
            ds_obs: 0.0,
            ..jumped
        });
    }
    Ok(Trajectory {
        params: *params,
        impact: *impact,
        states,
        seed: None,
        mode: Mode::OneShot,
    })
}
