//! The `solve`, `study` and `verify` commands behind the `wigner` binary.
//! Each command writes its human-readable summary to `out`; the binary maps
//! errors (and failed properties) to a nonzero exit status.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::analysis::{
    convergence_study, current, density, solve_with, symmetry_error, StudyReport, StudyRow,
};
use crate::config::{Emit, RunConfig};
use crate::csv;
use crate::error::{Error, Result};
use crate::solution::Method;
use crate::verify::{self, VerifyOptions};

/// Command-line flags that override the configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Replaces `output.directory`.
    pub out: Option<PathBuf>,
    /// Solver `rel_tol` for `solve` and `study`; property tolerance for `verify`.
    pub tol: Option<f64>,
}

/// Parses a comma-separated list; empty lists are rejected.
pub fn parse_list<T: FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    let items: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(Error::invalid(format!(
            "{flag} needs a non-empty comma-separated list"
        )));
    }
    items
        .into_iter()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::invalid(format!("{flag}: cannot parse `{s}`")))
        })
        .collect()
}

fn out_dir(cfg: &RunConfig, ov: &Overrides) -> Result<PathBuf> {
    let dir = ov
        .out
        .clone()
        .unwrap_or_else(|| cfg.output.directory.clone());
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn solver_tol(cfg: &RunConfig, ov: &Overrides) -> Result<f64> {
    match ov.tol {
        Some(t) if t > 0.0 && t <= 1e-6 => Ok(t),
        Some(t) => Err(Error::invalid(format!("--tol {t} is outside (0, 1e-6]"))),
        None => cfg.rel_tol(),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Solves the configured system once and writes the requested CSV files.
pub fn cmd_solve(config: &Path, ov: &Overrides, out: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::load(config)?;
    let system = cfg.system()?;
    let method = cfg.method()?;
    let rel_tol = solver_tol(&cfg, ov)?;
    let dir = out_dir(&cfg, ov)?;

    let start = Instant::now();
    let sol = solve_with(&system, method, rel_tol)?;
    let runtime = start.elapsed().as_secs_f64();
    let sym = symmetry_error(&sol);

    writeln!(out, "system          {}", system.describe()).map_err(io_err)?;
    writeln!(out, "method          {method}").map_err(io_err)?;
    writeln!(out, "symmetry_error  {sym:.6e}").map_err(io_err)?;
    writeln!(out, "residual        {:.3e}", sol.residual()).map_err(io_err)?;
    writeln!(out, "runtime_s       {runtime:.3}").map_err(io_err)?;

    let x = system.mesh.nodes();
    for what in Emit::ALL.into_iter().filter(|w| cfg.emits(*w)) {
        let path = dir.join(what.file_name());
        match what {
            Emit::Solution => csv::write_solution(&sol, &path)?,
            Emit::Density => csv::write_profile(x, &density(&sol), &path)?,
            Emit::Current => csv::write_profile(x, &current(&sol), &path)?,
            Emit::Report => {
                let report = StudyReport {
                    rows: vec![StudyRow {
                        method,
                        nx: sol.nx(),
                        symmetry_error: sym,
                        runtime_seconds: runtime,
                        residual: sol.residual(),
                        error: None,
                    }],
                    system_descriptor: system.describe(),
                };
                csv::write_study(&report, &path)?
            }
        }
        writeln!(out, "wrote           {}", path.display()).map_err(io_err)?;
    }
    Ok(())
}

/// Refinement study over `nx_list` for each method; writes `report.csv`.
/// Failed solves are recorded in their rows and do not fail the command.
pub fn cmd_study(
    config: &Path,
    nx_list: &[usize],
    methods: &[Method],
    ov: &Overrides,
    out: &mut dyn Write,
) -> Result<StudyReport> {
    let cfg = RunConfig::load(config)?;
    let system = cfg.system()?;
    let rel_tol = solver_tol(&cfg, ov)?;
    if methods.is_empty() {
        return Err(Error::invalid("--schemes needs at least one scheme"));
    }
    let dir = out_dir(&cfg, ov)?;

    let mut report: Option<StudyReport> = None;
    for &method in methods {
        let part = convergence_study(&system, method, nx_list, rel_tol)?;
        match report.as_mut() {
            Some(r) => r.extend(part),
            None => report = Some(part),
        }
    }
    let report = report.expect("at least one method");

    writeln!(out, "system  {}", report.system_descriptor).map_err(io_err)?;
    writeln!(
        out,
        "{:<8} {:>7} {:>16} {:>10} {:>10}",
        "scheme", "Nx", "symmetry_error", "runtime_s", "residual"
    )
    .map_err(io_err)?;
    for r in &report.rows {
        writeln!(
            out,
            "{:<8} {:>7} {:>16.6e} {:>10.3} {:>10.2e}{}",
            r.method.name(),
            r.nx,
            r.symmetry_error,
            r.runtime_seconds,
            r.residual,
            r.error
                .as_deref()
                .map(|e| format!("  ({e})"))
                .unwrap_or_default()
        )
        .map_err(io_err)?;
    }
    let path = dir.join(Emit::Report.file_name());
    csv::write_study(&report, &path)?;
    writeln!(out, "wrote   {}", path.display()).map_err(io_err)?;
    Ok(report)
}

/// Runs the property suite; returns whether every property passed.
pub fn cmd_verify(config: &Path, ov: &Overrides, out: &mut dyn Write) -> Result<bool> {
    let cfg = RunConfig::load(config)?;
    let system = cfg.system()?;
    let mut opts = VerifyOptions {
        rel_tol: cfg.rel_tol()?,
        ..VerifyOptions::default()
    };
    if let Some(t) = ov.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("--tol must be positive, got {t}")));
        }
        opts.tol = t;
    }
    writeln!(out, "system  {}", system.describe()).map_err(io_err)?;
    let report = verify::run_all(&system, cfg.method()?, &opts)?;
    for check in &report.checks {
        writeln!(out, "{check}").map_err(io_err)?;
    }
    Ok(report.all_passed())
}
