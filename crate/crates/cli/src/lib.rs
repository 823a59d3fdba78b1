//! Command-line front end for the angular eigenvalue solver.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use riccati_spectra::oracle::{eigencondition_roots, fd_eigenvalues};
use riccati_spectra::spectrum::{count_levels, defect_curve, find_eigenvalues, reconstruct_eigenfunction};
use riccati_spectra::TailClass;

pub use config::{parse_config, parse_config_for, Command, CommandKind, ConfigError, EnergyZero, Format, RunConfig};
pub use output::{format_number, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{source}")]
    Solver {
        stage: &'static str,
        #[source]
        source: riccati_spectra::Error,
    },
    #[error("eigenfunction: no level with n = {n} in [{e_min}, {e_max}]")]
    NoSuchLevel { n: usize, e_min: f64, e_max: f64 },
    #[error("verify: {0}")]
    Disagreement(String),
    #[error("output: {0}")]
    Io(#[from] io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
}

fn stage(stage: &'static str) -> impl FnOnce(riccati_spectra::Error) -> CliError {
    move |source| CliError::Solver { stage, source }
}

/// Runs the configured command, writing to `config.output` or standard
/// output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match &config.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            run_to(config, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            run_to(config, &mut lock)
        }
    }
}

/// Runs the configured command, writing the main artifact to `out`.
pub fn run_to(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let shift = config.energy_offset();
    let cfg = &config.tolerances;
    let problem = &config.problem;
    match config.command {
        Command::Solve { e_min, e_max } => {
            let r = find_eigenvalues(problem, e_min + shift, e_max + shift, cfg).map_err(stage("spectrum"))?;
            let mut table = Table::new(&["n", "energy", "gamma_residual"]);
            for e in &r.eigenvalues {
                table.push(vec![e.n.to_string(), format_number(e.energy - shift), format_number(e.gamma_residual)]);
            }
            table.write(out, config.format)?;
            if let Some(path) = &config.scan_out {
                write_scan(path, r.scan.iter().map(|s| (s.energy - shift, s.gamma, s.n_below)))?;
            }
        }
        Command::Scan { e_min, e_max, samples } => {
            let (_, curve) =
                defect_curve(problem, e_min + shift, e_max + shift, samples, cfg).map_err(stage("spectrum"))?;
            scan_table(curve.iter().map(|s| (s.energy - shift, s.gamma, s.n_below))).write(out, Format::Csv)?;
        }
        Command::Count { e_ceiling } => {
            let n = count_levels(problem, e_ceiling + shift, cfg).map_err(stage("spectrum"))?;
            writeln!(out, "{n}")?;
        }
        Command::Eigenfunction { n, e_min, e_max, grid } => {
            let r = find_eigenvalues(problem, e_min + shift, e_max + shift, cfg).map_err(stage("spectrum"))?;
            let level = r.eigenvalues.iter().find(|e| e.n == n).ok_or(CliError::NoSuchLevel { n, e_min, e_max })?;
            let points: Vec<f64> = match grid {
                Some((lo, hi, count)) => linspace(lo, hi, count),
                None => {
                    let (a, b) = r.problem.explicit_interval().expect("resolved problems carry an interval");
                    linspace(a, b, 401)
                }
            };
            let samples = reconstruct_eigenfunction(problem, level.energy, &points, cfg).map_err(stage("spectrum"))?;
            let mut table = Table::new(&["t", "psi"]);
            for (t, psi) in samples.t.iter().zip(&samples.psi) {
                table.push(vec![format_number(*t), format_number(*psi)]);
            }
            table.write(out, config.format)?;
        }
        Command::Verify { e_min, e_max, fd_grid } => verify(config, e_min + shift, e_max + shift, fd_grid, out)?,
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn scan_table(rows: impl Iterator<Item = (f64, f64, usize)>) -> Table {
    let mut table = Table::new(&["energy", "gamma", "n_below"]);
    for (e, g, n) in rows {
        table.push(vec![format_number(e), format_number(g), n.to_string()]);
    }
    table
}

fn write_scan(path: &Path, rows: impl Iterator<Item = (f64, f64, usize)>) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    scan_table(rows).write(&mut w, Format::Csv)?;
    w.flush()?;
    Ok(())
}

/// Compares the shooting spectrum with the finite-difference oracle and,
/// for constant tails, with the transfer-matrix eigencondition.
fn verify(config: &RunConfig, e_min: f64, e_max: f64, fd_grid: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let shift = config.energy_offset();
    let cfg = &config.tolerances;
    let problem = &config.problem;
    let levels = find_eigenvalues(problem, e_min, e_max, cfg).map_err(stage("spectrum"))?.eigenvalues;
    let fd = fd_eigenvalues(problem, e_max, fd_grid).map_err(stage("oracle"))?;
    let fd_levels: Vec<(f64, f64)> =
        fd.energies.iter().zip(&fd.error_estimates).filter(|(e, _)| **e >= e_min).map(|(e, r)| (*e, *r)).collect();
    let compact = matches!(
        (problem.left_tail, problem.right_tail),
        (TailClass::ConstantLevel { .. }, TailClass::ConstantLevel { .. })
    );
    let roots = if compact {
        Some(eigencondition_roots(problem, e_min, e_max, 400, &cfg.integrator).map_err(stage("oracle"))?)
    } else {
        None
    };

    let mut table = Table::new(&["n", "spectrum", "fd", "fd_error", "transfer", "max_gap"]);
    let mut worst_excess = 0.0f64;
    for (i, level) in levels.iter().enumerate() {
        let fd_level = fd_levels.get(i).copied();
        let root = roots.as_ref().and_then(|r| r.get(i).copied());
        let mut gap = 0.0f64;
        if let Some((f, ferr)) = fd_level {
            gap = gap.max((level.energy - f).abs());
            worst_excess = worst_excess.max((level.energy - f).abs() - (1e-6f64).max(2.0 * ferr));
        }
        if let Some(r) = root {
            gap = gap.max((level.energy - r).abs());
            worst_excess = worst_excess.max((level.energy - r).abs() - 1e-6);
        }
        table.push(vec![
            level.n.to_string(),
            format_number(level.energy - shift),
            fd_level.map_or("-".into(), |(f, _)| format_number(f - shift)),
            fd_level.map_or("-".into(), |(_, e)| format_number(e)),
            root.map_or("-".into(), |r| format_number(r - shift)),
            format_number(gap),
        ]);
    }
    table.write(out, config.format)?;
    let counts_agree = fd_levels.len() == levels.len() && roots.as_ref().is_none_or(|r| r.len() == levels.len());
    if !counts_agree {
        return Err(CliError::Disagreement(format!(
            "level counts differ: spectrum {}, fd {}, transfer {}",
            levels.len(),
            fd_levels.len(),
            roots.map_or("-".into(), |r| r.len().to_string())
        )));
    }
    if worst_excess > 0.0 {
        return Err(CliError::Disagreement(format!("oracles disagree beyond tolerance by {worst_excess:e}")));
    }
    Ok(())
}
