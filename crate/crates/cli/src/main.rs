//! Command-line front end: regime report, path simulation, bound tables and
//! the acceptance suite.

mod commands;
mod run_config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use arena_sde::bounds::K2Variant;
use arena_sde::validation::Fault;
use commands::Quantity;
use run_config::{parse_pair, RunConfig};

#[derive(Parser)]
#[command(
    name = "arena-sde",
    version,
    about = "Stochastic foraging-arena predator-prey toolkit"
)]
struct Cli {
    /// Flat `key = value` or JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Drift rate used in the predator constants (overrides `k2_variant`).
    #[arg(long, global = true, value_enum)]
    k2_variant: Option<VariantArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    AsPrinted,
    Corrected,
}

impl From<VariantArg> for K2Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::AsPrinted => K2Variant::AsPrinted,
            VariantArg::Corrected => K2Variant::Corrected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipEnvelope,
}

#[derive(Subcommand)]
enum Command {
    /// Regime classification, thresholds and stationary law.
    Regime {
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Simulate paths and write them with their envelopes as CSV.
    Simulate {
        /// Both reference noise levels plus the noiseless reference, on
        /// shared seeds.
        #[arg(long)]
        figure2: bool,
    },
    /// Moment and distribution-function bounds as CSV.
    Bounds {
        /// Moment order `P,Q`; repeatable.
        #[arg(long = "moment", value_name = "P,Q")]
        moments: Vec<String>,
        /// Evaluation times, comma separated (default: the horizon).
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        /// Prey levels, comma separated; paired with `--z2`.
        #[arg(long, value_delimiter = ',')]
        z1: Vec<f64>,
        /// Predator levels, comma separated; paired with `--z1`.
        #[arg(long, value_delimiter = ',')]
        z2: Vec<f64>,
        /// Add Monte Carlo estimates and a containment verdict per row.
        #[arg(long)]
        validate_mc: bool,
    },
    /// Run the acceptance suite; exits nonzero if any check fails.
    Validate {
        /// Reduced sample sizes with looser tolerances.
        #[arg(long)]
        quick: bool,
        /// Break the suite on purpose to see it fail.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

/// Pairs `z1` with `z2`, broadcasting a single value.
fn pair_levels(z1: &[f64], z2: &[f64]) -> Result<Vec<(f64, f64)>> {
    match (z1.len(), z2.len()) {
        (0, 0) => Ok(Vec::new()),
        (n, m) if n == m => Ok(z1.iter().copied().zip(z2.iter().copied()).collect()),
        (1, _) => Ok(z2.iter().map(|&b| (z1[0], b)).collect()),
        (_, 1) => Ok(z1.iter().map(|&a| (a, z2[0])).collect()),
        (n, m) => {
            bail!("--z1 has {n} values and --z2 has {m}; give equal counts or a single value")
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut rc = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out {
        rc.out = Some(out);
    }
    if let Some(v) = cli.k2_variant {
        rc.k2_variant = v.into();
    }
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();

    match cli.command {
        Command::Regime { json } => {
            let report = commands::regime_report(&rc);
            commands::print_regime(&report, json, &mut stdout)?;
        }
        Command::Simulate { figure2 } => {
            let dir = rc
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("arena-sde-out"));
            let files = commands::simulate(&rc, &dir, figure2)?;
            for f in files {
                writeln!(stdout, "{}", f.display())?;
            }
        }
        Command::Bounds {
            moments,
            t,
            z1,
            z2,
            validate_mc,
        } => {
            if !moments.is_empty() {
                rc.moments = moments
                    .iter()
                    .map(|m| parse_pair(m))
                    .collect::<Result<_>>()?;
            }
            let levels = pair_levels(&z1, &z2)?;
            if !levels.is_empty() {
                rc.levels = levels;
            }
            if rc.moments.is_empty() && rc.levels.is_empty() {
                rc.moments = vec![(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
            }
            let times = if t.is_empty() { vec![rc.horizon] } else { t };
            let quantities = Quantity::expand(&rc.moments, &rc.levels);
            let rows = commands::bounds_rows(&rc, &times, &quantities, validate_mc)?;
            if let Some(path) = commands::write_bounds_to(&rows, rc.out.as_deref(), &mut stdout)? {
                writeln!(stdout, "{}", path.display())?;
            }
        }
        Command::Validate {
            quick,
            inject_fault,
        } => {
            let fault = inject_fault.map(|FaultArg::FlipEnvelope| Fault::FlipEnvelope);
            let report = commands::validate(&rc, quick, fault, |c| eprintln!("{c}"));
            let json = serde_json::to_string_pretty(&report)?;
            writeln!(stdout, "{json}")?;
            if let Some(dir) = &rc.out {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("validate.json"), format!("{json}\n"))?;
            }
            if !report.passed {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                eprintln!("failed checks: {}", failed.join(", "));
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e)
            if e.downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
