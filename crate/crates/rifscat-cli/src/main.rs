mod commands;
mod config;
mod error;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{read_config_file, Resolver, OUT_DIR_ENV};
use crate::error::CliError;

/// Scattering of light at a moving refractive-index step in fused silica.
///
/// Every option can also be set in a `key = value` config file (`--config`), with
/// `-` in flag names written as `_` or `-`. Flags win over the file. The default
/// output directory comes from RIFSCAT_OUT_DIR, else the current directory.
#[derive(Debug, Parser)]
#[command(name = "rifscat", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Config file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $RIFSCAT_OUT_DIR or `.`).
    #[arg(long, global = true)]
    out_dir: Option<String>,
    /// Output file; `-` writes to stdout. Default: <out_dir>/<command>.<ext>.
    #[arg(long, global = true)]
    output: Option<String>,
    /// csv or json (matrix and report commands are json only).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Index step at the reference wavelength [default: 2e-6].
    #[arg(long, global = true)]
    delta_n: Option<String>,
    /// Front speed: `2/3c`, `0.6667c`, `1.98e8m/s` or a velocity-matched wavelength such as `400nm` [default: 2/3c].
    #[arg(long, global = true)]
    u: Option<String>,
    /// Wavelength at which the index step is defined [default: 800nm].
    #[arg(long, global = true)]
    lambda_ref: Option<String>,
    /// linear or exact conversion of the index step to the dispersion scaling [default: linear].
    #[arg(long, global = true)]
    mu_rule: Option<String>,
}

#[derive(Debug, Args)]
struct OmegaGrid {
    /// Lower front-frame frequency, rad/s.
    #[arg(long)]
    omega_min: Option<String>,
    /// Upper front-frame frequency, rad/s.
    #[arg(long)]
    omega_max: Option<String>,
    /// Base grid points.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Debug, Args)]
struct LambdaGrid {
    /// Shortest lab wavelength (e.g. 200nm).
    #[arg(long)]
    lambda_min: Option<String>,
    /// Longest lab wavelength.
    #[arg(long)]
    lambda_max: Option<String>,
    /// Grid points (geometric spacing).
    #[arg(long)]
    points: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Local modes (k, lab frequency and wavenumber, group velocity, label) over an omega grid, CSV.
    Dispersion {
        #[command(flatten)]
        grid: OmegaGrid,
        /// log or lin spacing [default: log].
        #[arg(long)]
        grid_spacing: Option<String>,
        /// L, R or both [default: both].
        #[arg(long)]
        side: Option<String>,
    },
    /// Subluminal and horizon intervals with the scenario sequence for a ladder of index steps, JSON.
    Scenario {
        /// Comma-separated index steps [default: 1e-6,...,1e-1].
        #[arg(long)]
        delta_n_list: Option<String>,
    },
    /// Scattering matrix at one front-frame frequency or at the front-frame images of a lab wavelength, JSON.
    Smatrix {
        /// Front-frame frequency, rad/s.
        #[arg(long)]
        omega: Option<String>,
        /// Lab wavelength.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Front-frame flux per out mode, CSV.
    Spectrum {
        #[command(flatten)]
        grid: OmegaGrid,
        /// Extra points inside each horizon interval [default: 200].
        #[arg(long)]
        interval_points: Option<String>,
    },
    /// Lab-frame spectral density per unit wavelength, CSV.
    Labspectrum {
        #[command(flatten)]
        grid: LambdaGrid,
    },
    /// Photon-number correlation coefficients between lab wavelength cells, CSV matrix plus JSON metadata.
    Corrmap {
        #[command(flatten)]
        grid: LambdaGrid,
    },
    /// Horizon emission rows (wavelengths, fluxes, correlations) for a list of front speeds, JSON.
    Table1 {
        /// Comma-separated speeds in any `--u` form [default: 396.34nm,800nm,2.0525/3c,1990nm].
        #[arg(long)]
        velocities: Option<String>,
        /// Frequencies scanned per horizon interval [default: 600].
        #[arg(long)]
        scan_points: Option<String>,
    },
    /// Randomized oracle suite, JSON; exits 1 if an oracle disagrees.
    Verify {
        /// Configurations per oracle [default: 100].
        #[arg(long)]
        configs: Option<String>,
        #[arg(long)]
        seed: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dispersion { .. } => "dispersion",
            Command::Scenario { .. } => "scenario",
            Command::Smatrix { .. } => "smatrix",
            Command::Spectrum { .. } => "spectrum",
            Command::Labspectrum { .. } => "labspectrum",
            Command::Corrmap { .. } => "corrmap",
            Command::Table1 { .. } => "table1",
            Command::Verify { .. } => "verify",
        }
    }
}

fn flag_map(cli: &Cli) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: &Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v.clone());
        }
    };
    let c = &cli.common;
    put("out_dir", &c.out_dir);
    put("output", &c.output);
    put("format", &c.format);
    put("threads", &c.threads);
    put("delta_n", &c.delta_n);
    put("u", &c.u);
    put("lambda_ref", &c.lambda_ref);
    put("mu_rule", &c.mu_rule);
    match &cli.command {
        Command::Dispersion { grid, grid_spacing, side } => {
            put("omega_min", &grid.omega_min);
            put("omega_max", &grid.omega_max);
            put("points", &grid.points);
            put("grid_spacing", grid_spacing);
            put("side", side);
        }
        Command::Scenario { delta_n_list } => put("delta_n_list", delta_n_list),
        Command::Smatrix { omega, lambda } => {
            put("omega", omega);
            put("lambda", lambda);
        }
        Command::Spectrum { grid, interval_points } => {
            put("omega_min", &grid.omega_min);
            put("omega_max", &grid.omega_max);
            put("points", &grid.points);
            put("interval_points", interval_points);
        }
        Command::Labspectrum { grid } | Command::Corrmap { grid } => {
            put("lambda_min", &grid.lambda_min);
            put("lambda_max", &grid.lambda_max);
            put("points", &grid.points);
        }
        Command::Table1 { velocities, scan_points } => {
            put("velocities", velocities);
            put("scan_points", scan_points);
        }
        Command::Verify { configs, seed } => {
            put("configs", configs);
            put("seed", seed);
        }
    }
    m
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.common.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let env_out = std::env::var(OUT_DIR_ENV).ok().filter(|s| !s.is_empty());
    let mut resolver = Resolver::new(flag_map(&cli), file, env_out);
    commands::dispatch(cli.command.name(), &mut resolver)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rifscat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
