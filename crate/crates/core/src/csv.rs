//! Plain CSV output. Fields are separated by `", "` and reals are written with
//! 17 significant digits, so reading a file back is exact.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::analysis::StudyReport;
use crate::error::{Error, Result};
use crate::solution::DiscreteSolution;

pub const SOLUTION_HEADER: &str = "x, v, f";
pub const STUDY_HEADER: &str = "scheme, Nx, symmetry_error, runtime_s, residual";
pub const PROFILE_HEADER: &str = "x, value";

const SEP: &str = ", ";

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_lines<I>(path: &Path, header: &str, lines: I) -> Result<()>
where
    I: IntoIterator<Item = String>,
{
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let emit = || -> std::io::Result<()> {
        writeln!(w, "{header}")?;
        for line in lines {
            writeln!(w, "{line}")?;
        }
        w.flush()
    };
    emit().map_err(|e| Error::io(path, e))
}

/// One row per `(x_j, v_i)`, node by node.
pub fn write_solution(sol: &DiscreteSolution, path: impl AsRef<Path>) -> Result<()> {
    let sys = sol.system();
    let nodes = sys.mesh.nodes();
    let velocities = sys.grid.velocities();
    let lines = (0..=sol.nx()).flat_map(|j| {
        velocities
            .iter()
            .enumerate()
            .map(move |(p, v)| [real(nodes[j]), real(*v), real(sol.at(p, j))].join(SEP))
    });
    write_lines(path.as_ref(), SOLUTION_HEADER, lines)
}

pub fn write_study(report: &StudyReport, path: impl AsRef<Path>) -> Result<()> {
    let lines = report.rows.iter().map(|r| {
        [
            r.method.name().to_string(),
            r.nx.to_string(),
            real(r.symmetry_error),
            real(r.runtime_seconds),
            real(r.residual),
        ]
        .join(SEP)
    });
    write_lines(path.as_ref(), STUDY_HEADER, lines)
}

/// A space-indexed profile such as density or current.
pub fn write_profile(x: &[f64], values: &[f64], path: impl AsRef<Path>) -> Result<()> {
    if x.len() != values.len() {
        return Err(Error::invalid(format!(
            "profile has {} nodes but {} values",
            x.len(),
            values.len()
        )));
    }
    let lines = x
        .iter()
        .zip(values)
        .map(|(x, v)| [real(*x), real(*v)].join(SEP));
    write_lines(path.as_ref(), PROFILE_HEADER, lines)
}

/// A parsed CSV file: header names and raw fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// The named column parsed as reals.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::invalid(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let field = row.get(k).ok_or_else(|| {
                    Error::invalid(format!("row {} has no column `{name}`", r + 1))
                })?;
                field.parse().map_err(|_| {
                    Error::invalid(format!("row {}: `{field}` is not a number", r + 1))
                })
            })
            .collect()
    }
}

pub fn read_table(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let split = |l: &str| {
        l.split(',')
            .map(|s| s.trim().to_string())
            .collect::<Vec<_>>()
    };
    let header = lines
        .next()
        .map(split)
        .ok_or_else(|| Error::invalid(format!("{} is empty", path.display())))?;
    Ok(Table {
        header,
        rows: lines.map(split).collect(),
    })
}
