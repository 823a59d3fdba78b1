use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use riccati_spectra_cli::{parse_config_for, run, CliError, CommandKind, Format, RunConfig};

/// Bound-state energies from the angular (phase) equation.
#[derive(Debug, Parser)]
#[command(name = "spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Aligned table or CSV.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// With `solve`, also write the (E, Γ) scan as CSV.
    #[arg(long, global = true)]
    scan_out: Option<PathBuf>,
    /// Width of the final bisection bracket.
    #[arg(long, global = true)]
    e_tol: Option<f64>,
    /// Relative tolerance of the adaptive integrator.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the adaptive integrator.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Largest cue residual accepted at automatic interval ends.
    #[arg(long, global = true)]
    residual_tol: Option<f64>,
    /// Required margin V(t) − E beyond automatic interval ends.
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Most series terms used by the asymptotic cues.
    #[arg(long, global = true)]
    n_terms: Option<usize>,
    /// Step budget of one integration.
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Working interval, overriding the configured or automatic one.
    #[arg(long, global = true, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    interval: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Eigenvalue table for [emin, emax].
    Solve { config: PathBuf },
    /// CSV of Γ(E) on uniform energies.
    Scan { config: PathBuf },
    /// Number of levels below `ceiling`.
    Count { config: PathBuf },
    /// Normalized eigenfunction of level `n`.
    Eigenfunction { config: PathBuf },
    /// Compare with the finite-difference and transfer-matrix oracles.
    Verify { config: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
}

fn configure(cli: Cli) -> Result<RunConfig, CliError> {
    let (kind, path) = match cli.command {
        Sub::Solve { config } => (CommandKind::Solve, config),
        Sub::Scan { config } => (CommandKind::Scan, config),
        Sub::Count { config } => (CommandKind::Count, config),
        Sub::Eigenfunction { config } => (CommandKind::Eigenfunction, config),
        Sub::Verify { config } => (CommandKind::Verify, config),
    };
    let text = std::fs::read_to_string(&path)?;
    let mut config = parse_config_for(&text, kind)?;
    let flag_error = |key: &str, message: String| {
        CliError::Config(riccati_spectra_cli::ConfigError { line: 0, key: key.into(), message })
    };
    if let Some(v) = cli.e_tol {
        config.tolerances.e_tol = v;
    }
    if let Some(v) = cli.rel_tol {
        config.tolerances.integrator.rel_tol = v;
    }
    if let Some(v) = cli.abs_tol {
        config.tolerances.integrator.abs_tol = v;
    }
    if let Some(v) = cli.residual_tol {
        config.tolerances.residual_tol = v;
    }
    if let Some(v) = cli.kappa {
        config.tolerances.kappa = v;
    }
    if let Some(v) = cli.n_terms {
        config.tolerances.n_terms = v;
    }
    if let Some(v) = cli.max_steps {
        config.tolerances.integrator.max_steps = v;
    }
    config.tolerances.validate().map_err(|e| flag_error("tolerances", e.to_string()))?;
    if let Some(ab) = cli.interval {
        config.problem =
            config.problem.with_interval(ab[0], ab[1]).map_err(|e| flag_error("--interval", e.to_string()))?;
    }
    config.output = cli.output;
    config.scan_out = cli.scan_out;
    if let Some(f) = cli.format {
        config.format = match f {
            OutputFormat::Table => Format::Table,
            OutputFormat::Csv => Format::Csv,
        };
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure(cli).and_then(|c| run(&c)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spectra: {e}");
            ExitCode::FAILURE
        }
    }
}
