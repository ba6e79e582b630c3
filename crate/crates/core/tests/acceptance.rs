//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for each,
//! and exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gamma_feedback::analysis::{
    analyze_fixed_point, bifurcation_surface, extract_contour, stability_grid, GridSpec,
};
use gamma_feedback::dynamics::{
    position_decay, shock_decay, simulate_one_shot, simulate_recursive, simulate_recursive_from,
    SimState, Trajectory,
};
use gamma_feedback::io::RunManifest;
use gamma_feedback::model::{denominator_at, phi, relative_surprise};
use gamma_feedback::stochastic::{
    effective_exposure, exposure_cap, generate_event_spikes, simulate_stochastic,
    simulate_with_schedule, EventSpec, StochasticSpec,
};
use gamma_feedback::{Impact, ModelParams};
use rand_core::{Rng as _, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

/// Exact rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Q(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Q {
    fn new(n: i128, d: i128) -> Q {
        let g = gcd(n, d).max(1) * d.signum();
        Q(n / g, d / g)
    }

    /// Parses a decimal literal such as "0.003" exactly.
    fn dec(s: &str) -> Q {
        let (neg, s) = s.strip_prefix('-').map_or((false, s), |r| (true, r));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let d = 10i128.pow(frac.len() as u32);
        let n = format!("{int}{frac}").parse::<i128>().unwrap();
        Q::new(if neg { -n } else { n }, d)
    }

    fn int(n: i128) -> Q {
        Q(n, 1)
    }

    fn add(self, o: Q) -> Q {
        Q::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }

    fn sub(self, o: Q) -> Q {
        self.add(Q(-o.0, o.1))
    }

    fn mul(self, o: Q) -> Q {
        Q::new(self.0 * o.0, self.1 * o.1)
    }

    fn div(self, o: Q) -> Q {
        Q::new(self.0 * o.1, self.1 * o.0)
    }

    fn pow(self, k: u32) -> Q {
        (0..k).fold(Q::int(1), |acc, _| acc.mul(self))
    }

    fn f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

/// Square root by bisection on `y² ≤ v`, independent of `f64::sqrt`.
fn sqrt_bisect(v: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, v.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid <= v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(f64::MIN_POSITIVE)
}

/// `x = ΔS / (S·β·σ_m)`, exactly.
fn q_surprise(ds: &str, s: &str, beta: &str, sigma: &str) -> Q {
    Q::dec(ds).div(Q::dec(s).mul(Q::dec(beta)).mul(Q::dec(sigma)))
}

// ---------------------------------------------------------------- criteria

fn closed_form() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    let mut check = |name: &str, got: f64, want: Q, printed: f64| -> Result<(), String> {
        let w = want.f64();
        checked += 1;
        ensure!(rel_close(got, w, 1e-9), "{name}: got {got}, oracle {w}");
        // the six-decimal reference value must agree with the oracle as well
        ensure!(
            (w - printed).abs() <= 5e-7 * printed.abs().max(1.0),
            "{name}: oracle {w} vs reference {printed}"
        );
        Ok(())
    };

    let x1 = q_surprise("5", "100", "1", "0.03");
    let x2 = q_surprise("5", "100", "2", "0.03");
    check(
        "x(beta=1)",
        relative_surprise(5.0, 100.0, 1.0, 0.03).unwrap(),
        x1,
        1.666667,
    )?;
    check(
        "x(beta=2)",
        relative_surprise(5.0, 100.0, 2.0, 0.03).unwrap(),
        x2,
        0.833333,
    )?;

    let k = Q::int(2);
    let phi1 = Q::int(1).add(k.mul(x1));
    let phi2 = Q::int(1).add(k.mul(x2));
    check("phi(1.666667)", phi(x1.f64(), 2.0).unwrap(), phi1, 4.333333)?;
    check("phi(0.833333)", phi(x2.f64(), 2.0).unwrap(), phi2, 2.666667)?;

    let lambda = Q::dec("0.003");
    let d1 = Q::int(1).sub(lambda.mul(Q::int(100)).mul(phi1));
    let d2 = Q::int(1).sub(lambda.mul(Q::int(50)).mul(phi2));
    check(
        "D(G=100,beta=1)",
        denominator_at(0.003, 100.0, 1.0, 0.03, 2.0, 0.05).unwrap(),
        d1,
        -0.3,
    )?;
    check(
        "D(G=50,beta=2)",
        denominator_at(0.003, 50.0, 2.0, 0.03, 2.0, 0.05).unwrap(),
        d2,
        0.6,
    )?;

    let g_star = Q::int(1).div(lambda.mul(phi1));
    check(
        "G*",
        bifurcation_surface(0.003, 1.0, 0.05, 0.03, 2.0).unwrap(),
        g_star,
        76.923077,
    )?;

    let decay = |m: &str| Q::int(200).div(Q::int(1).add(Q::int(2).mul(Q::dec(m).pow(5))));
    check(
        "N(m=1)",
        position_decay(200.0, 1.0, 2.0, 5.0).unwrap(),
        decay("1"),
        66.666667,
    )?;
    check(
        "N(m=0.5)",
        position_decay(200.0, 0.5, 2.0, 5.0).unwrap(),
        decay("0.5"),
        188.235294,
    )?;

    let mu = |n_t: &str| Q::dec("0.025").mul(Q::dec(n_t)).div(Q::int(200));
    check(
        "mu(N=N0)",
        shock_decay(0.025, 200.0, 200.0).unwrap(),
        mu("200"),
        0.025,
    )?;
    check(
        "mu(N=100)",
        shock_decay(0.025, 100.0, 200.0).unwrap(),
        mu("100"),
        0.0125,
    )?;
    let mu0 = shock_decay(0.025, 0.0, 200.0).unwrap();
    ensure!(mu0 == 0.0, "mu(N=0) = {mu0}");

    // cap = n0 + κ·σ_N·n0/√(1−ρ²); the ρ = 0 case is rational
    let cap0 = Q::int(200).add(Q::int(8).mul(Q::dec("0.2")).mul(Q::int(200)));
    check(
        "cap(rho=0)",
        exposure_cap(200.0, 0.2, 0.0, 8.0).unwrap(),
        cap0,
        520.0,
    )?;
    let one_minus = Q::int(1).sub(Q::dec("0.9").pow(2)).f64();
    let cap = 200.0 + 8.0 * 40.0 / sqrt_bisect(one_minus);
    let got = exposure_cap(200.0, 0.2, 0.9, 8.0).unwrap();
    ensure!(
        rel_close(got, cap, 1e-9),
        "cap(rho=0.9): got {got}, oracle {cap}"
    );
    checked += 1;

    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "{checked} closed-form values within 1e-9 of exact oracles; cap(rho=0.9) = {cap:.6}"
    ))
}

/// Largest |G − G*(β)| over all D = 0 contour vertices, and the G cell width.
fn contour_deviation(n: usize) -> Result<(f64, f64), String> {
    let spec = GridSpec {
        n_beta: n,
        n_g: n,
        ..GridSpec::default()
    };
    let scan = stability_grid(&spec).map_err(|e| e.to_string())?;
    let contour = extract_contour(&scan, 0.0);
    ensure!(!contour.is_empty(), "no D = 0 contour on {n}x{n}");
    let root =
        |beta: f64| 1.0 / (spec.lambda * (1.0 + spec.k * spec.shock_ratio / (beta * spec.sigma_m)));
    let max_dev = contour
        .vertices()
        .map(|(beta, g)| (g - root(beta)).abs())
        .fold(0.0, f64::max);
    // every β column must be crossed
    for i in 0..spec.n_beta {
        let beta = spec.beta_at(i);
        ensure!(
            contour
                .vertices()
                .any(|(b, _)| (b - beta).abs() <= 0.5 * spec.beta_step()),
            "no contour vertex near beta = {beta}"
        );
    }
    Ok((max_dev, spec.g_step()))
}

fn threshold_equivalence() -> Outcome {
    let started = Instant::now();
    let (dev, cell) = contour_deviation(200)?;
    let (dev_half, cell_half) = contour_deviation(399)?;
    let elapsed = started.elapsed();
    ensure!(dev <= cell, "max deviation {dev} exceeds cell width {cell}");
    ensure!(dev_half <= 0.5 * dev, "halving cells: {dev} -> {dev_half}");
    ensure!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    Ok(format!(
        "max |G - G*| = {dev:.3e} (cell {cell:.3}); at half cell ({cell_half:.3}) = {dev_half:.3e}; {elapsed:.2?}"
    ))
}

fn iterate_affine(a: f64, f: f64, d0: f64, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(d0);
    for _ in 0..steps {
        out.push(a + f * out.last().unwrap());
    }
    out
}

/// Recursive run whose observed moves follow `d ↦ f·d`: no drift, no decay,
/// flat convexity, linear impact and unit exposure, so the feedback factor is λ.
fn frozen_feedback_run(f: f64, d0: f64, horizon: usize) -> Trajectory {
    let params = ModelParams {
        lambda: f,
        mu0: 0.0,
        k: 0.0,
        eta: 0.0,
        n0: 1.0,
        gamma0: 1.0,
        ..ModelParams::default()
    };
    let initial = SimState {
        ds_obs: d0,
        ..SimState::initial(&params)
    };
    simulate_recursive_from(initial, &params, &Impact::Linear, horizon).unwrap()
}

fn affine_oracle() -> Outcome {
    let mut rng = Xoshiro256StarStar::seed_from_u64(2024);
    let mut uniform =
        |lo: f64, hi: f64| lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut worst_fp = 0.0f64;
    let mut worst_sim = 0.0f64;
    for _ in 0..50 {
        let a = uniform(-10.0, 10.0);
        let f = uniform(-0.99, 0.99);
        let report = analyze_fixed_point(a, f);
        let limit = report.fixed_point.ok_or("stable map reported singular")?;
        let it = iterate_affine(a, f, 0.0, 10_000);
        let err = (it[10_000] - limit).abs();
        ensure!(err <= 1e-9, "a={a} f={f}: |iterate - a/(1-f)| = {err}");
        worst_fp = worst_fp.max(err);

        let d0 = uniform(0.1, 2.0);
        let tr = frozen_feedback_run(f, d0, 200);
        let oracle = iterate_affine(0.0, f, d0, 200);
        for (t, (s, o)) in tr.states.iter().zip(&oracle).enumerate() {
            let e = (s.ds_obs - o).abs() / o.abs().max(1.0);
            ensure!(e <= 1e-12, "f={f} step {t}: simulated {} vs {o}", s.ds_obs);
            worst_sim = worst_sim.max(e);
        }
    }
    for f in [1.01, 1.1] {
        let a = uniform(0.1, 5.0);
        let it = iterate_affine(a, f, 0.0, 10_000);
        ensure!(
            it[10_000].abs() > 1e6 * a,
            "f={f}: iterate {} not divergent",
            it[10_000]
        );
        let tr = frozen_feedback_run(f, 1.0, 100);
        let oracle = iterate_affine(0.0, f, 1.0, 100);
        for (s, o) in tr.states.iter().zip(&oracle) {
            let e = (s.ds_obs - o).abs() / o.abs().max(1.0);
            ensure!(e <= 1e-12, "f={f}: simulated {} vs {o}", s.ds_obs);
            worst_sim = worst_sim.max(e);
        }
    }
    Ok(format!(
        "50 stable maps converge (worst {worst_fp:.1e}); f in {{1.01, 1.1}} diverge; simulated moves match iterates to {worst_sim:.1e} (a = 0)"
    ))
}

fn bounded_under_saturation() -> Outcome {
    let started = Instant::now();
    let mut rng = Xoshiro256StarStar::seed_from_u64(77);
    let mut uniform =
        |lo: f64, hi: f64| lo + (hi - lo) * (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut max_price = 0.0f64;
    for combo in 0..1000 {
        let params = ModelParams {
            lambda: uniform(0.0, 0.1),
            mu0: uniform(0.0, 0.05),
            beta: uniform(0.2, 3.0),
            ..ModelParams::default()
        }
        .with_exposure(uniform(1.0, 500.0));
        let tr = simulate_recursive(&params, &Impact::default(), 500)
            .map_err(|e| format!("combination {combo} {params:?}: {e}"))?;
        for w in tr.states.windows(2) {
            ensure!(w[1].s.is_finite(), "combination {combo}: non-finite price");
            ensure!(
                w[1].n_t <= w[0].n_t,
                "combination {combo}: N increased at t={}",
                w[1].t
            );
            ensure!(
                w[1].m_cum >= w[0].m_cum,
                "combination {combo}: m_cum decreased at t={}",
                w[1].t
            );
        }
        max_price = max_price.max(tr.last().s);
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "1000 runs of 500 steps finite and monotone; max final price {max_price:.1}; {elapsed:.2?}"
    ))
}

const MU0S: [f64; 5] = [0.005, 0.01, 0.015, 0.02, 0.025];
const BETAS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

fn paper_params(mu0: f64, beta: f64) -> ModelParams {
    ModelParams {
        mu0,
        beta,
        ..ModelParams::default()
    }
}

fn strictly(xs: &[f64], increasing: bool) -> bool {
    xs.windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

fn spread(trs: &[Trajectory], t: usize) -> f64 {
    let prices = trs.iter().map(|tr| tr.states[t].s);
    let hi = prices.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo = prices.fold(f64::INFINITY, f64::min);
    hi - lo
}

fn figure_shapes() -> Outcome {
    let impact = Impact::default();
    let horizon = 500;

    let by_mu: Vec<f64> = MU0S
        .iter()
        .map(|&m| {
            simulate_one_shot(&paper_params(m, 1.0), &impact, horizon)
                .unwrap()
                .last()
                .s
        })
        .collect();
    let a = strictly(&by_mu, true);

    let by_beta: Vec<f64> = BETAS
        .iter()
        .map(|&b| {
            simulate_one_shot(&paper_params(0.025, b), &impact, horizon)
                .unwrap()
                .last()
                .s
        })
        .collect();
    let b = strictly(&by_beta, false);

    let recursive: Vec<Trajectory> = BETAS
        .iter()
        .map(|&b| simulate_recursive(&paper_params(0.025, b), &impact, horizon).unwrap())
        .collect();
    let (early, late) = (spread(&recursive, 3), spread(&recursive, horizon));
    let c = early > late;

    let sweep: Vec<Trajectory> = MU0S
        .iter()
        .map(|&m| simulate_recursive(&paper_params(m, 1.0), &impact, horizon).unwrap())
        .collect();
    let d = sweep.windows(2).all(|w| {
        w[0].states
            .iter()
            .zip(&w[1].states)
            .skip(1)
            .all(|(lo, hi)| hi.s > lo.s)
    });

    let detail = format!(
        "(a) plateau by mu0 {by_mu:.4?} {}; (b) plateau by beta {by_beta:.4?} {}; (c) spread t=3 {early:.3} vs t={horizon} {late:.3} {}; (d) pointwise mu0 dominance {}",
        ok_word(a),
        ok_word(b),
        ok_word(c),
        ok_word(d)
    );
    if a && b && c && d {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn stochastic_statistics() -> Outcome {
    let started = Instant::now();
    let stoch = StochasticSpec::default();
    let params = ModelParams {
        eta: 0.0,
        mu0: 0.0,
        n0: 100.0,
        ..ModelParams::default()
    };
    let tr = simulate_stochastic(&params, &Impact::default(), &stoch, 1_000_000)
        .map_err(|e| e.to_string())?;
    let harness_time = started.elapsed();
    let nu: Vec<f64> = tr.states[1000..].iter().map(|s| s.nu_t).collect();
    let n = nu.len() as f64;
    let mean = nu.iter().sum::<f64>() / n;
    let sd = (nu.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let oracle = stoch.sigma_n * 100.0 / sqrt_bisect(1.0 - stoch.rho * stoch.rho);
    ensure!((sd / oracle - 1.0).abs() < 0.02, "sd {sd} vs {oracle}");
    ensure!(
        harness_time < Duration::from_secs(1),
        "harness took {harness_time:?}"
    );

    let base = ModelParams::default();
    for seed in 0..100 {
        let s = StochasticSpec { seed, ..stoch };
        let cap = s.cap(base.n0).unwrap();
        let run =
            simulate_stochastic(&base, &Impact::default(), &s, 500).map_err(|e| e.to_string())?;
        for st in &run.states {
            let n_bar = effective_exposure(st, cap);
            ensure!(
                (0.0..=cap).contains(&n_bar),
                "seed {seed} t {}: {n_bar} outside [0, {cap}]",
                st.t
            );
        }
    }

    let quiet = StochasticSpec {
        sigma_n: 0.0,
        ..stoch
    };
    let a = simulate_stochastic(&base, &Impact::default(), &quiet, 500).unwrap();
    let b = simulate_recursive(&base, &Impact::default(), 500).unwrap();
    let identical =
        a.states.iter().zip(&b.states).all(|(x, y)| {
            x.s.to_bits() == y.s.to_bits() && x.ds_obs.to_bits() == y.ds_obs.to_bits()
        });
    ensure!(identical, "sigma_n = 0 differs from the deterministic run");
    Ok(format!(
        "sd {sd:.4} vs {oracle:.6} ({:+.2}%) in {harness_time:.2?}; 100 runs censored; sigma_n = 0 bit-exact",
        100.0 * (sd / oracle - 1.0)
    ))
}

fn event_driven() -> Outcome {
    let params = ModelParams::default();
    let events = EventSpec::default();
    let spikes = generate_event_spikes(&events, params.n0).map_err(|e| e.to_string())?;
    ensure!(spikes.len() == 70, "{} spikes", spikes.len());
    let bound = 0.3 * params.n0;
    ensure!(
        spikes.values().all(|&v| (0.0..=bound).contains(&v)),
        "magnitude outside [0, {bound}]"
    );
    let cap = StochasticSpec::default().cap(params.n0).unwrap();
    let impact = Impact::default();
    let with_all =
        simulate_with_schedule(&params, &impact, &spikes, events.horizon, cap, None).unwrap();

    let mut compared = 0;
    let mut strict = 0;
    for (&t, &v) in &spikes {
        let at = &with_all.states[t];
        if !(v > 0.0 && at.ds_obs > 0.0) || t + 1 > events.horizon {
            continue;
        }
        let mut without: BTreeMap<usize, f64> = spikes.clone();
        without.remove(&t);
        let base =
            simulate_with_schedule(&params, &impact, &without, events.horizon, cap, None).unwrap();
        ensure!(
            base.states[..t] == with_all.states[..t] && base.states[t].s == at.s,
            "history differs before t={t}"
        );
        let (hit, miss) = (with_all.states[t + 1].ds_obs, base.states[t + 1].ds_obs);
        ensure!(
            hit >= miss,
            "spike at t={t}: next ds {hit} < baseline {miss}"
        );
        compared += 1;
        strict += (hit > miss) as usize;
    }
    ensure!(compared > 0, "no mid-squeeze spikes to compare");
    Ok(format!(
        "70 spikes in [0, {bound}]; {compared} mid-squeeze spikes raise next-step ds ({strict} strictly)"
    ))
}

fn cli_run(dir: &Path, sub: &str, config: &Path, out: &str) -> Result<RunManifest, String> {
    let target = dir.join(out);
    let status = Command::new(env!("CARGO_BIN_EXE_gamma-feedback"))
        .args([sub, "--quiet", "--seed", "7", "--config"])
        .arg(config)
        .arg("--out")
        .arg(&target)
        .status()
        .map_err(|e| e.to_string())?;
    ensure!(status.success(), "{sub} exited with {status}");
    RunManifest::read(&target).map_err(|e| e.to_string())
}

fn reproducibility() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = tmp.path().join("run.toml");
    fs::write(
        &config,
        "[stochastic]\n[events]\n[grid]\nn_beta = 50\nn_g = 50\n[run]\nhorizon = 300\nsweep_mu0 = [0.01, 0.025]\n",
    )
    .map_err(|e| e.to_string())?;
    let mut files = 0;
    for sub in [
        "simulate-stochastic",
        "simulate-events",
        "stability-map",
        "simulate",
    ] {
        let a = cli_run(tmp.path(), sub, &config, &format!("{sub}-a"))?;
        let b = cli_run(tmp.path(), sub, &config, &format!("{sub}-b"))?;
        ensure!(a.outputs == b.outputs, "{sub}: manifest digests differ");
        for o in &a.outputs {
            let x = fs::read(tmp.path().join(format!("{sub}-a")).join(&o.path)).unwrap();
            let y = fs::read(tmp.path().join(format!("{sub}-b")).join(&o.path)).unwrap();
            ensure!(x == y, "{sub}/{}: bytes differ", o.path);
            files += 1;
        }
        ensure!(
            a.verify(&tmp.path().join(format!("{sub}-a")))
                .unwrap()
                .is_empty(),
            "{sub}: digest does not match disk"
        );
    }
    Ok(format!(
        "{files} CSV files byte-identical across two invocations; digests match"
    ))
}

fn end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let grid = tmp.path().join("grid.toml");
    let sweep = tmp.path().join("sweep.toml");
    let stoch = tmp.path().join("stoch.toml");
    fs::write(&grid, "[grid]\n").unwrap();
    fs::write(
        &sweep,
        "[run]\nhorizon = 500\nsweep_mu0 = [0.005, 0.01, 0.015, 0.02, 0.025]\n",
    )
    .unwrap();
    fs::write(&stoch, "[stochastic]\n[run]\nhorizon = 500\n").unwrap();
    let started = Instant::now();
    let m1 = cli_run(tmp.path(), "stability-map", &grid, "fig1a")?;
    let m2 = cli_run(tmp.path(), "simulate", &sweep, "fig4")?;
    let m3 = cli_run(tmp.path(), "simulate-stochastic", &stoch, "fig6")?;
    let elapsed = started.elapsed();
    ensure!(
        m1.output("stability_grid.csv").and_then(|o| o.rows) == Some(40_000),
        "grid rows"
    );
    ensure!(
        m2.outputs.len() == 5,
        "sweep produced {} files",
        m2.outputs.len()
    );
    ensure!(
        m3.output("trajectory.csv").and_then(|o| o.rows) == Some(501),
        "stochastic rows"
    );
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "200x200 grid + 5-trajectory sweep + stochastic run in {elapsed:.2?}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed-form values", closed_form),
        ("threshold equivalence", threshold_equivalence),
        ("affine-map oracle", affine_oracle),
        ("boundedness under saturation", bounded_under_saturation),
        ("figure-shape properties", figure_shapes),
        ("stochastic statistics", stochastic_statistics),
        ("event-driven run", event_driven),
        ("reproducibility", reproducibility),
        ("end-to-end desk-scale run", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
