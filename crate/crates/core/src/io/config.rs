//! Sectioned `key = value` run configuration.
//!
//! ```text
//! [model]       lambda, beta, sigma_m, n0, gamma0, mu0, k, c, eta, xi, s0
//! [impact]      kind = "linear" | "clamp" | "tanh", i_max, c
//! [stochastic]  rho, sigma_n, kappa, seed
//! [events]      n_spikes, max_fraction, horizon, seed
//! [grid]        beta_min, beta_max, g_min, g_max, n_beta, n_g, shock_ratio, lambda, sigma_m, k
//! [run]         horizon, mode = "recursive" | "one_shot", sweep_mu0, sweep_beta, output_dir, emit_svg
//! ```
//!
//! Omitted keys take the reference defaults. A missing `[impact]` section means
//! `tanh` with the model's `c`.

use serde::{Deserialize, Serialize};

use crate::analysis::GridSpec;
use crate::error::{Error, Result};
use crate::model::{Impact, ModelParams};
use crate::stochastic::{EventSpec, StochasticSpec};

/// Largest seed the text format can hold (TOML integers are signed 64-bit).
pub const MAX_SEED: u64 = i64::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    #[default]
    Recursive,
    OneShot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub horizon: usize,
    pub mode: SimMode,
    /// One trajectory per listed shock; empty means the model's `mu0` only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep_mu0: Vec<f64>,
    /// One trajectory per listed beta; crossed with `sweep_mu0` when both are set.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep_beta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    pub emit_svg: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            horizon: 500,
            mode: SimMode::Recursive,
            sweep_mu0: Vec::new(),
            sweep_beta: Vec::new(),
            output_dir: None,
            emit_svg: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ImpactKind {
    Linear,
    Clamp,
    Tanh,
}

/// `[impact]` as written; resolved against `[model]` into an [`Impact`].
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImpactSection {
    kind: ImpactKind,
    c: Option<f64>,
    i_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    model: ModelParams,
    impact: Option<ImpactSection>,
    stochastic: Option<StochasticSpec>,
    events: Option<EventSpec>,
    grid: Option<GridSpec>,
    #[serde(default)]
    run: RunSection,
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct RunConfig {
    pub model: ModelParams,
    pub impact: Impact,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stochastic: Option<StochasticSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub events: Option<EventSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub run: RunSection,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn invalid(section: &str, err: Error) -> Error {
    match err {
        Error::Domain {
            field,
            value,
            constraint,
        } => Error::ConfigInvalid {
            field: format!("{section}.{field}"),
            message: format!("{value} {constraint}"),
        },
        other => other,
    }
}

fn check_seed(field: &str, seed: u64) -> Result<()> {
    if seed > MAX_SEED {
        return Err(Error::ConfigInvalid {
            field: field.into(),
            message: format!("{seed} exceeds {MAX_SEED}"),
        });
    }
    Ok(())
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
        message: e.message().to_string(),
    })?;

    let impact = match raw.impact {
        None => Impact::Tanh { c: raw.model.c },
        Some(ImpactSection { kind, c, i_max }) => match kind {
            ImpactKind::Linear => Impact::Linear,
            ImpactKind::Tanh => Impact::Tanh {
                c: c.unwrap_or(raw.model.c),
            },
            ImpactKind::Clamp => Impact::Clamp {
                i_max: i_max.ok_or_else(|| Error::ConfigInvalid {
                    field: "impact.i_max".into(),
                    message: "required when kind = \"clamp\"".into(),
                })?,
            },
        },
    };

    let config = RunConfig {
        model: raw.model,
        impact,
        stochastic: raw.stochastic,
        events: raw.events,
        grid: raw.grid,
        run: raw.run,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(|e| invalid("model", e))?;
        self.impact.validate().map_err(|e| invalid("impact", e))?;
        if let Some(s) = &self.stochastic {
            s.validate().map_err(|e| invalid("stochastic", e))?;
            check_seed("stochastic.seed", s.seed)?;
        }
        if let Some(e) = &self.events {
            e.validate().map_err(|err| invalid("events", err))?;
            check_seed("events.seed", e.seed)?;
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| invalid("grid", e))?;
        }
        if self.run.horizon < 1 {
            return Err(Error::ConfigInvalid {
                field: "run.horizon".into(),
                message: "must be >= 1".into(),
            });
        }
        for (i, mu0) in self.run.sweep_mu0.iter().enumerate() {
            if !mu0.is_finite() {
                return Err(Error::ConfigInvalid {
                    field: format!("run.sweep_mu0[{i}]"),
                    message: "must be finite".into(),
                });
            }
        }
        for (i, beta) in self.run.sweep_beta.iter().enumerate() {
            if !(*beta > 0.0) || !beta.is_finite() {
                return Err(Error::ConfigInvalid {
                    field: format!("run.sweep_beta[{i}]"),
                    message: "must be > 0".into(),
                });
            }
        }
        Ok(())
    }

    /// Serializes the resolved configuration; `parse_config(render())` returns `self`.
    pub fn render(&self) -> String {
        let mut doc = toml::Table::try_from(self).expect("config serializes to a table");
        // the tagged enum serializes as { kind, c } / { kind, i_max } / { kind }
        let impact = toml::Value::try_from(self.impact).expect("impact serializes");
        doc.insert("impact".into(), impact);
        toml::to_string(&doc).expect("table renders")
    }

    /// Model parameter variants for the configured sweep, with their labels.
    pub fn sweep(&self) -> Vec<(String, ModelParams)> {
        let mus: Vec<Option<f64>> = if self.run.sweep_mu0.is_empty() {
            vec![None]
        } else {
            self.run.sweep_mu0.iter().copied().map(Some).collect()
        };
        let betas: Vec<Option<f64>> = if self.run.sweep_beta.is_empty() {
            vec![None]
        } else {
            self.run.sweep_beta.iter().copied().map(Some).collect()
        };
        let mut out = Vec::new();
        for mu in &mus {
            for beta in &betas {
                let mut p = self.model;
                let mut label = Vec::new();
                if let Some(mu0) = mu {
                    p.mu0 = *mu0;
                    label.push(format!("mu0={mu0}"));
                }
                if let Some(b) = beta {
                    p.beta = *b;
                    label.push(format!("beta={b}"));
                }
                if label.is_empty() {
                    label.push(format!("mu0={}", p.mu0));
                }
                out.push((label.join(" "), p));
            }
        }
        out
    }
}
