//! Stochastic option exposure on top of the deterministic decay.
//!
//! The effective exposure fed to the hedging term is `N̄_t = N_t + ν_t`,
//! censored to `[0, cap]`. In the continuous variant `ν` follows an AR(1)
//! process scaled by the deterministic `N_t`; in the event-driven variant `ν_t`
//! is a single-step spike at randomly chosen times and zero elsewhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{step_recursive, Mode, SimState, Trajectory};
use crate::error::{Error, Result};
use crate::model::{Impact, ModelParams};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StochasticSpec {
    /// AR(1) persistence, strictly inside (−1, 1).
    pub rho: f64,
    /// Deviation volatility relative to the current position.
    pub sigma_n: f64,
    /// Cap multiplier on the stationary deviation scale.
    pub kappa: f64,
    pub seed: u64,
}

impl Default for StochasticSpec {
    fn default() -> Self {
        StochasticSpec {
            rho: 0.9,
            sigma_n: 0.2,
            kappa: 8.0,
            seed: 42,
        }
    }
}

impl StochasticSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() < 1.0) {
            return Err(Error::domain("rho", self.rho, "|rho| must be < 1"));
        }
        if !(self.sigma_n >= 0.0) || !self.sigma_n.is_finite() {
            return Err(Error::domain("sigma_n", self.sigma_n, "must be >= 0"));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::domain("kappa", self.kappa, "must be > 0"));
        }
        Ok(())
    }

    pub fn cap(&self, n0: f64) -> Result<f64> {
        exposure_cap(n0, self.sigma_n, self.rho, self.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventSpec {
    pub n_spikes: usize,
    /// Spike magnitudes are uniform on `[0, max_fraction · n0]`.
    pub max_fraction: f64,
    pub horizon: usize,
    pub seed: u64,
}

impl Default for EventSpec {
    fn default() -> Self {
        EventSpec {
            n_spikes: 70,
            max_fraction: 0.3,
            horizon: 500,
            seed: 42,
        }
    }
}

impl EventSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_fraction >= 0.0) || !self.max_fraction.is_finite() {
            return Err(Error::domain(
                "max_fraction",
                self.max_fraction,
                "must be >= 0",
            ));
        }
        if self.horizon < 1 {
            return Err(Error::domain(
                "horizon",
                self.horizon as f64,
                "must be >= 1",
            ));
        }
        if self.n_spikes > self.horizon {
            return Err(Error::domain(
                "n_spikes",
                self.n_spikes as f64,
                "must be <= horizon",
            ));
        }
        Ok(())
    }
}

/// `ν' = ρ·ν + σ_N·N_t·ε`.
pub fn ar1_step(nu: f64, rho: f64, sigma_n: f64, n_t: f64, epsilon: f64) -> f64 {
    rho * nu + sigma_n * n_t * epsilon
}

/// Upper exposure reference `N₀ + κ·σ_N·N₀/√(1−ρ²)`.
pub fn exposure_cap(n0: f64, sigma_n: f64, rho: f64, kappa: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain("rho", rho, "|rho| must be < 1"));
    }
    Ok(n0 + kappa * sigma_n * n0 / (1.0 - rho * rho).sqrt())
}

/// Clips the effective exposure to `[0, cap]`.
pub fn censor_exposure(n_bar: f64, cap: f64) -> f64 {
    n_bar.max(0.0).min(cap)
}

/// Censored effective exposure of a recorded state.
pub fn effective_exposure(state: &SimState, cap: f64) -> f64 {
    censor_exposure(state.n_t + state.nu_t, cap)
}

/// Steps whose uncensored exposure `n_t + nu_t` lies above `cap`.
pub fn cap_hits(traj: &Trajectory, cap: f64) -> usize {
    traj.states.iter().filter(|s| s.n_t + s.nu_t > cap).count()
}

fn run_with_exposure(
    params: &ModelParams,
    impact: &Impact,
    horizon: usize,
    cap: f64,
    mut advance_nu: impl FnMut(&SimState) -> f64,
    initial_nu: f64,
) -> Result<Vec<SimState>> {
    let mut state = SimState {
        nu_t: initial_nu,
        ..SimState::initial(params)
    };
    let mut states = Vec::with_capacity(horizon + 1);
    for _ in 0..horizon {
        let n_bar = effective_exposure(&state, cap);
        let mut next = step_recursive(&state, params, impact, Some(n_bar))?;
        next.nu_t = advance_nu(&state);
        states.push(state);
        state = next;
    }
    states.push(state);
    Ok(states)
}

/// Recursive feedback with AR(1) exposure deviations. Bit-identical for identical inputs.
pub fn simulate_stochastic(
    params: &ModelParams,
    impact: &Impact,
    stoch: &StochasticSpec,
    horizon: usize,
) -> Result<Trajectory> {
    params.validate()?;
    impact.validate()?;
    stoch.validate()?;
    if horizon < 1 {
        return Err(Error::domain("horizon", horizon as f64, "must be >= 1"));
    }
    let cap = stoch.cap(params.n0)?;
    let mut rng = Rng::seed_from_u64(stoch.seed);
    let states = run_with_exposure(
        params,
        impact,
        horizon,
        cap,
        |s| {
            let eps = rng.next_normal();
            // scale is the deterministic position, never the censored exposure
            ar1_step(s.nu_t, stoch.rho, stoch.sigma_n, s.n_t, eps)
        },
        0.0,
    )?;
    Ok(Trajectory {
        params: *params,
        impact: *impact,
        states,
        seed: Some(stoch.seed),
        mode: Mode::Stochastic,
    })
}

/// Distinct spike times drawn without replacement from `[0, horizon)`, each with a
/// magnitude uniform on `[0, max_fraction · n0]`.
pub fn generate_event_spikes(spec: &EventSpec, n0: f64) -> Result<BTreeMap<usize, f64>> {
    spec.validate()?;
    let mut rng = Rng::seed_from_u64(spec.seed);
    let mut slots: Vec<usize> = (0..spec.horizon).collect();
    // partial Fisher–Yates: the first n_spikes slots become the sample
    for i in 0..spec.n_spikes {
        let j = i + rng.below((spec.horizon - i) as u64) as usize;
        slots.swap(i, j);
    }
    let scale = spec.max_fraction * n0;
    Ok(slots[..spec.n_spikes]
        .iter()
        .map(|&t| (t, rng.next_f64() * scale))
        .collect())
}

/// Event-driven run with the default stochastic cap.
pub fn simulate_event_driven(
    params: &ModelParams,
    impact: &Impact,
    events: &EventSpec,
) -> Result<Trajectory> {
    let cap = StochasticSpec::default().cap(params.n0)?;
    simulate_event_driven_with_cap(params, impact, events, cap)
}

pub fn simulate_event_driven_with_cap(
    params: &ModelParams,
    impact: &Impact,
    events: &EventSpec,
    cap: f64,
) -> Result<Trajectory> {
    params.validate()?;
    impact.validate()?;
    let schedule = generate_event_spikes(events, params.n0)?;
    simulate_with_schedule(
        params,
        impact,
        &schedule,
        events.horizon,
        cap,
        Some(events.seed),
    )
}

/// Recursive run where `ν_t = schedule[t]` (zero off-schedule). Spikes last one step.
pub fn simulate_with_schedule(
    params: &ModelParams,
    impact: &Impact,
    schedule: &BTreeMap<usize, f64>,
    horizon: usize,
    cap: f64,
    seed: Option<u64>,
) -> Result<Trajectory> {
    params.validate()?;
    impact.validate()?;
    if horizon < 1 {
        return Err(Error::domain("horizon", horizon as f64, "must be >= 1"));
    }
    let spike = |t: usize| schedule.get(&t).copied().unwrap_or(0.0);
    let states = run_with_exposure(params, impact, horizon, cap, |s| spike(s.t + 1), spike(0))?;
    Ok(Trajectory {
        params: *params,
        impact: *impact,
        states,
        seed,
        mode: Mode::EventDriven,
    })
}
