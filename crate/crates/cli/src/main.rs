use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use curved_dirac::{AngularMomentum, SurfaceKind};
use curved_dirac_cli::{run, CommandName, Failure, PartialConfig};

/// Geometry, analytic profiles and finite-difference spectra of massless
/// Dirac fermions on Gaussian and volcano bumps.
///
/// Settings come from built-in defaults, then `--config`, then flags.
#[derive(Debug, Parser)]
#[command(name = "curved-dirac", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Option<CommandName>,

    /// JSON file with any of the keys below (flags win over it).
    #[arg(long)]
    config: Option<PathBuf>,

    /// gaussian, volcano or flat.
    #[arg(long)]
    surface: Option<SurfaceKind>,

    #[arg(long)]
    amplitude: Option<f64>,

    #[arg(long)]
    width: Option<f64>,

    /// Half-integer angular momentum, e.g. 1/2 or -3/2.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<AngularMomentum>,

    #[arg(long)]
    r_min: Option<f64>,

    #[arg(long)]
    r_max: Option<f64>,

    /// Grid step; must divide r_max - r_min.
    #[arg(long)]
    h: Option<f64>,

    /// Number of eigenvalues per sublattice (solve, compare).
    #[arg(long)]
    eigencount: Option<usize>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Wavenumber of the analytic profiles.
    #[arg(long)]
    kappa: Option<f64>,

    /// Number of grid levels for converge.
    #[arg(long)]
    levels: Option<usize>,

    /// Comma-separated mode indices written by solve.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<usize>>,
}

impl Cli {
    fn layer(self) -> (Option<PathBuf>, PartialConfig) {
        let flags = PartialConfig {
            command: self.command,
            surface: self.surface,
            amplitude: self.amplitude,
            width: self.width,
            m: self.m,
            r_min: self.r_min,
            r_max: self.r_max,
            h: self.h,
            eigencount: self.eigencount,
            out: self.out,
            kappa: self.kappa,
            levels: self.levels,
            modes: self.modes,
        };
        (self.config, flags)
    }
}

fn resolve(cli: Cli) -> anyhow::Result<curved_dirac_cli::RunConfig> {
    let (file, flags) = cli.layer();
    let base = match file {
        Some(path) => PartialConfig::load(&path)?,
        None => PartialConfig::default(),
    };
    base.overridden_by(flags).resolve()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("config error: {}", line.trim_start_matches("error: ").trim());
            return ExitCode::from(2);
        }
    };
    let outcome = resolve(cli)
        .map_err(Failure::Config)
        .and_then(|cfg| run(&cfg));
    match outcome {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
