use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::Parser;

use gamma_feedback::io::{parse_config, run_subcommand, RunConfig, RunManifest, Subcommand};
use gamma_feedback::Error;

const NAMES: [&str; 8] = [
    "stability-map",
    "amplification-map",
    "static-response",
    "simulate",
    "simulate-stochastic",
    "simulate-events",
    "bifurcation-scan",
    "fixed-point",
];

/// Gamma-hedging feedback simulator.
///
/// Exit codes: 0 success, 2 configuration error, 3 numerical error
/// (overflow or singular denominator), 4 I/O error. Failures print a JSON
/// error record on stderr.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Subcommand to run.
    #[arg(value_parser = PossibleValuesParser::new(NAMES))]
    command: String,
    /// Sectioned key = value config; omitted keys take reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (must not exist or be empty); overrides `run.output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every stochastic section; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

fn run(cli: &Cli) -> Result<(PathBuf, RunManifest), Error> {
    let sub: Subcommand = cli.command.parse()?;
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    config = config.resolved_for(sub);
    if let Some(seed) = cli.seed {
        config = config.with_seed(seed);
    }
    if cli.svg {
        config.run.emit_svg = true;
    }
    let out = match (&cli.out, &config.run.output_dir) {
        (Some(out), _) => out.clone(),
        (None, Some(dir)) => PathBuf::from(dir),
        (None, None) => {
            return Err(Error::ConfigInvalid {
                field: "run.output_dir".into(),
                message: "no output directory; pass --out or set run.output_dir".into(),
            })
        }
    };
    let manifest = run_subcommand(sub, &config, &out)?;
    Ok((out, manifest))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, manifest)) => {
            if !cli.quiet {
                for o in &manifest.outputs {
                    match o.rows {
                        Some(rows) => println!("{} ({rows} rows)", out.join(&o.path).display()),
                        None => println!("{}", out.join(&o.path).display()),
                    }
                }
                println!("{}", out.join("manifest.json").display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            let record = serde_json::json!({
                "error": err.kind(),
                "message": err.to_string(),
                "exit_code": err.exit_code(),
            });
            eprintln!("{record}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
