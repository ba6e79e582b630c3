//! Subcommand dispatch: compute every artifact in memory, then write the CSVs,
//! optional SVGs and `manifest.json` into a fresh output directory.
//!
//! `fixed_point.csv` encodes the classification as `stability`:
//! 0 stable, 1 unstable, 2 flip boundary, 3 blowup boundary.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::analysis::{
    amplification_grid, analyze_fixed_point, bifurcation_curve, extract_contour,
    linearized_feedback, stability_grid, ContourSet, GridSpec, Stability,
};
use crate::dynamics::{simulate_one_shot, simulate_recursive, Trajectory};
use crate::error::{Error, Result};
use crate::model::{phi, relative_surprise, stability_denominator, static_response};
use crate::rng::ALGORITHM;
use crate::stochastic::{generate_event_spikes, simulate_stochastic, simulate_with_schedule};
use crate::stochastic::{EventSpec, StochasticSpec};

use super::config::{RunConfig, SimMode};
use super::csv::{contour_csv, grid_csv, table_csv, trajectory_csv};
use super::manifest::{sha256_hex, OutputEntry, RunManifest, MANIFEST_FILE};
use super::svg::{emit_svg, PlotArtifact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcommand {
    StabilityMap,
    AmplificationMap,
    StaticResponse,
    Simulate,
    SimulateStochastic,
    SimulateEvents,
    BifurcationScan,
    FixedPoint,
}

impl Subcommand {
    pub const ALL: [Subcommand; 8] = [
        Subcommand::StabilityMap,
        Subcommand::AmplificationMap,
        Subcommand::StaticResponse,
        Subcommand::Simulate,
        Subcommand::SimulateStochastic,
        Subcommand::SimulateEvents,
        Subcommand::BifurcationScan,
        Subcommand::FixedPoint,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::StabilityMap => "stability-map",
            Subcommand::AmplificationMap => "amplification-map",
            Subcommand::StaticResponse => "static-response",
            Subcommand::Simulate => "simulate",
            Subcommand::SimulateStochastic => "simulate-stochastic",
            Subcommand::SimulateEvents => "simulate-events",
            Subcommand::BifurcationScan => "bifurcation-scan",
            Subcommand::FixedPoint => "fixed-point",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::ConfigInvalid {
                field: "subcommand".into(),
                message: format!("unknown subcommand {s:?}"),
            })
    }
}

impl RunConfig {
    /// Keeps exactly the optional sections `sub` reads, filling absent ones with defaults.
    /// `simulate-events` keeps `[stochastic]` only if given; it then supplies the cap.
    pub fn resolved_for(&self, sub: Subcommand) -> RunConfig {
        let mut c = self.clone();
        let grid = c.grid.take();
        let stochastic = c.stochastic.take();
        let events = c.events.take();
        match sub {
            Subcommand::StabilityMap
            | Subcommand::AmplificationMap
            | Subcommand::BifurcationScan => {
                c.grid = Some(grid.unwrap_or_default());
            }
            Subcommand::SimulateStochastic => c.stochastic = Some(stochastic.unwrap_or_default()),
            Subcommand::SimulateEvents => {
                c.events = Some(events.unwrap_or_default());
                c.stochastic = stochastic;
            }
            Subcommand::StaticResponse | Subcommand::Simulate | Subcommand::FixedPoint => {}
        }
        c
    }

    /// Overrides the seed of every stochastic section present.
    pub fn with_seed(mut self, seed: u64) -> RunConfig {
        if let Some(s) = &mut self.stochastic {
            s.seed = seed;
        }
        if let Some(e) = &mut self.events {
            e.seed = seed;
        }
        self
    }
}

struct Artifacts {
    files: Vec<(String, String)>,
    seeds: Vec<u64>,
    random: bool,
}

fn stability_code(s: Stability) -> f64 {
    match s {
        Stability::Stable => 0.0,
        Stability::Unstable => 1.0,
        Stability::FlipBoundary => 2.0,
        Stability::BlowupBoundary => 3.0,
    }
}

fn trajectory_name(k: usize, n: usize) -> String {
    if n == 1 {
        "trajectory.csv".into()
    } else {
        format!("trajectory_{k:02}.csv")
    }
}

fn grid_files(
    sub: Subcommand,
    spec: &GridSpec,
    svg: bool,
    files: &mut Vec<(String, String)>,
) -> Result<()> {
    let stability = stability_grid(spec)?;
    let zero = extract_contour(&stability, 0.0);
    match sub {
        Subcommand::StabilityMap => {
            files.push(("stability_grid.csv".into(), grid_csv(&stability)));
            files.push(("contour_D0.csv".into(), contour_csv(&zero)));
            if svg {
                let c = [("D = 0".to_string(), zero)];
                let art = PlotArtifact::Grid {
                    scan: &stability,
                    contours: &c,
                };
                files.push((
                    "stability_map.svg".into(),
                    emit_svg(&art, "Stability denominator D")?,
                ));
            }
        }
        Subcommand::AmplificationMap => {
            let amp = amplification_grid(spec)?;
            let two = extract_contour(&amp, 2.0);
            files.push(("amplification_grid.csv".into(), grid_csv(&amp)));
            files.push(("contour_D0.csv".into(), contour_csv(&zero)));
            files.push(("contour_amp2.csv".into(), contour_csv(&two)));
            if svg {
                let c = [("D = 0".to_string(), zero), ("1/D = 2".to_string(), two)];
                let art = PlotArtifact::Grid {
                    scan: &amp,
                    contours: &c,
                };
                files.push((
                    "amplification_map.svg".into(),
                    emit_svg(&art, "Amplification 1/D")?,
                ));
            }
        }
        Subcommand::BifurcationScan => {
            let curve = bifurcation_curve(spec)?;
            let rows: Vec<Vec<f64>> = curve.iter().map(|&(b, g)| vec![b, g]).collect();
            files.push((
                "bifurcation_curve.csv".into(),
                table_csv(&["beta", "G_star"], &rows),
            ));
            files.push(("contour_D0.csv".into(), contour_csv(&zero)));
            if svg {
                let c = [(
                    "G*(beta)".to_string(),
                    ContourSet {
                        level: 0.0,
                        polylines: vec![curve],
                    },
                )];
                let art = PlotArtifact::Grid {
                    scan: &stability,
                    contours: &c,
                };
                files.push((
                    "bifurcation_scan.svg".into(),
                    emit_svg(&art, "Critical exposure G*(beta)")?,
                ));
            }
        }
        _ => unreachable!("not a grid subcommand"),
    }
    Ok(())
}

fn compute(sub: Subcommand, cfg: &RunConfig) -> Result<Artifacts> {
    let svg = cfg.run.emit_svg;
    let horizon = cfg.run.horizon;
    let sweep = cfg.sweep();
    let mut files = Vec::new();
    let mut seeds = Vec::new();
    let mut random = false;
    match sub {
        Subcommand::StabilityMap | Subcommand::AmplificationMap | Subcommand::BifurcationScan => {
            let spec = cfg.grid.unwrap_or_default();
            grid_files(sub, &spec, svg, &mut files)?;
        }
        Subcommand::StaticResponse => {
            let mut rows = Vec::new();
            for (_, p) in &sweep {
                let x = relative_surprise(p.mu0, 1.0, p.beta, p.sigma_m)?;
                let d = stability_denominator(p, p.mu0)?;
                let ds = static_response(p, p.mu0, p.s0)?;
                rows.push(vec![p.beta, p.mu0, x, phi(x, p.k)?, d, ds]);
            }
            files.push((
                "static_response.csv".into(),
                table_csv(&["beta", "mu0", "x", "phi", "D", "dS"], &rows),
            ));
        }
        Subcommand::FixedPoint => {
            let mut rows = Vec::new();
            for (_, p) in &sweep {
                let r = analyze_fixed_point(p.mu0 * p.s0, linearized_feedback(p, &cfg.impact));
                rows.push(vec![
                    p.beta,
                    p.mu0,
                    r.a,
                    r.f,
                    r.fixed_point.unwrap_or(f64::NAN),
                    r.fixed_point.is_none() as u8 as f64,
                    stability_code(r.classification),
                ]);
            }
            files.push((
                "fixed_point.csv".into(),
                table_csv(
                    &[
                        "beta",
                        "mu0",
                        "a",
                        "f",
                        "fixed_point",
                        "singular",
                        "stability",
                    ],
                    &rows,
                ),
            ));
        }
        Subcommand::Simulate => {
            let mut series = Vec::new();
            for (label, p) in &sweep {
                let tr = match cfg.run.mode {
                    SimMode::Recursive => simulate_recursive(p, &cfg.impact, horizon)?,
                    SimMode::OneShot => simulate_one_shot(p, &cfg.impact, horizon)?,
                };
                series.push((label.clone(), tr));
            }
            for (k, (_, tr)) in series.iter().enumerate() {
                files.push((trajectory_name(k, series.len()), trajectory_csv(tr)));
            }
            if svg {
                let title = match cfg.run.mode {
                    SimMode::Recursive => "Recursive hedging feedback",
                    SimMode::OneShot => "One-shot hedging",
                };
                files.push((
                    "trajectories.svg".into(),
                    emit_svg(&PlotArtifact::Trajectories(&series), title)?,
                ));
            }
        }
        Subcommand::SimulateStochastic => {
            let stoch = cfg.stochastic.unwrap_or_default();
            seeds.push(stoch.seed);
            random = true;
            let mut series: Vec<(String, Trajectory)> = Vec::new();
            for (k, (label, p)) in sweep.iter().enumerate() {
                let tr = simulate_stochastic(p, &cfg.impact, &stoch, horizon)?;
                files.push((trajectory_name(k, sweep.len()), trajectory_csv(&tr)));
                if svg {
                    let base = simulate_recursive(p, &cfg.impact, horizon)?;
                    series.push((format!("{label} stochastic"), tr));
                    series.push((format!("{label} deterministic"), base));
                }
            }
            if svg {
                files.push((
                    "trajectories.svg".into(),
                    emit_svg(&PlotArtifact::Trajectories(&series), "Stochastic exposure")?,
                ));
            }
        }
        Subcommand::SimulateEvents => {
            let events: EventSpec = cfg.events.unwrap_or_default();
            seeds.push(events.seed);
            random = true;
            let stoch = cfg.stochastic.unwrap_or_default();
            for (k, (_, p)) in sweep.iter().enumerate() {
                let spikes = generate_event_spikes(&events, p.n0)?;
                let cap = StochasticSpec::cap(&stoch, p.n0)?;
                let tr = simulate_with_schedule(
                    p,
                    &cfg.impact,
                    &spikes,
                    events.horizon,
                    cap,
                    Some(events.seed),
                )?;
                let suffix = if sweep.len() == 1 {
                    String::new()
                } else {
                    format!("_{k:02}")
                };
                files.push((format!("trajectory{suffix}.csv"), trajectory_csv(&tr)));
                let rows: Vec<Vec<f64>> = spikes.iter().map(|(&t, &v)| vec![t as f64, v]).collect();
                files.push((
                    format!("spikes{suffix}.csv"),
                    table_csv(&["t", "nu"], &rows),
                ));
                if svg {
                    let art = PlotArtifact::Events {
                        trajectory: &tr,
                        spikes: &spikes,
                    };
                    files.push((
                        format!("events{suffix}.svg"),
                        emit_svg(&art, "Event-driven exposure spikes")?,
                    ));
                }
            }
        }
    }
    Ok(Artifacts {
        files,
        seeds,
        random,
    })
}

/// Runs `sub` against `config` and writes the outputs into `out_dir`, which must
/// not exist yet or be empty.
pub fn run_subcommand(sub: Subcommand, config: &RunConfig, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let cfg = config.resolved_for(sub);
    cfg.validate()?;

    if out_dir.exists() {
        let mut entries = fs::read_dir(out_dir).map_err(|e| Error::io(out_dir, e))?;
        if entries.next().is_some() {
            return Err(Error::io(
                out_dir,
                std::io::Error::new(
                    std::io::ErrorKind::AlreadyExists,
                    "output directory is not empty; runs never overwrite",
                ),
            ));
        }
    }

    let art = compute(sub, &cfg)?;

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut outputs = Vec::new();
    for (name, body) in &art.files {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        outputs.push(OutputEntry {
            path: name.clone(),
            sha256: sha256_hex(body.as_bytes()),
            bytes: body.len() as u64,
            rows: name
                .ends_with(".csv")
                .then(|| body.lines().count().saturating_sub(1)),
        });
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: sub.name().into(),
        config: cfg.render(),
        seeds: art.seeds,
        prng: art.random.then(|| ALGORITHM.to_string()),
        duration_ms: started.elapsed().as_secs_f64() * 1e3,
        outputs,
    };
    let path = out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.to_json()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
