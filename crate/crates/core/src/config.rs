//! TOML run configuration.
//!
//! ```toml
//! [potential]
//! period_l = 1.0
//! coeffs = [20.0, 20.0]      # a_0, a_1, ...
//!
//! [grid]
//! s_over_kappa = 0.5
//! M = 40
//! symmetric = true
//!
//! [mesh]
//! Nx = 100
//!
//! [boundary]
//! mode = "mono"              # or "table" with table = [{ i = 0, f = 1.0 }, ...]
//! i0 = 0
//!
//! [solver]
//! scheme = "central"         # upwind1 | upwind2 | central | oracle
//! rel_tol = 1e-12
//!
//! [output]
//! directory = "out"
//! emit = ["solution", "density", "current", "report"]
//! ```
//!
//! Unknown keys are rejected. Every semantic error names its key, for
//! example `grid.s_over_kappa`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fd::DEFAULT_REL_TOL;
use crate::kinetic::{BoundaryData, SpatialMesh, VelocityGrid, WignerSystem};
use crate::potential::FourierPotential;
use crate::solution::Method;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub period_l: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_s_over_kappa")]
    pub s_over_kappa: f64,
    #[serde(rename = "M", default = "default_m")]
    pub m: i64,
    #[serde(default = "default_true")]
    pub symmetric: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            s_over_kappa: default_s_over_kappa(),
            m: default_m(),
            symmetric: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(rename = "Nx")]
    pub nx: i64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub i: i64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub mode: String,
    pub i0: Option<i64>,
    pub table: Option<Vec<TableEntry>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            scheme: default_scheme(),
            rel_tol: DEFAULT_REL_TOL,
        }
    }
}

/// Files a command may write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Solution,
    Density,
    Current,
    Report,
}

impl Emit {
    pub const ALL: [Emit; 4] = [Emit::Solution, Emit::Density, Emit::Current, Emit::Report];

    pub fn file_name(self) -> &'static str {
        match self {
            Emit::Solution => "solution.csv",
            Emit::Density => "density.csv",
            Emit::Current => "current.csv",
            Emit::Report => "report.csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: default_directory(),
            emit: default_emit(),
        }
    }
}

fn default_s_over_kappa() -> f64 {
    0.5
}
fn default_m() -> i64 {
    40
}
fn default_true() -> bool {
    true
}
fn default_scheme() -> String {
    "central".into()
}
fn default_rel_tol() -> f64 {
    DEFAULT_REL_TOL
}
fn default_directory() -> PathBuf {
    PathBuf::from(".")
}
fn default_emit() -> Vec<Emit> {
    Emit::ALL.to_vec()
}

/// A parsed and validated configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialConfig,
    #[serde(default)]
    pub grid: GridConfig,
    pub mesh: MeshConfig,
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn keyed(key: &'static str) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::InvalidArgument(m) => Error::config(key, m),
        other => other,
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let mut message = e.message().trim().to_string();
            if let Some(span) = e.span() {
                let line = text[..span.start].matches('\n').count() + 1;
                message = format!("line {line}: {message}");
            }
            Error::config("toml", message)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Checks every key; called by the constructors.
    pub fn validate(&self) -> Result<()> {
        self.system()?;
        self.method()?;
        self.rel_tol()?;
        Ok(())
    }

    pub fn method(&self) -> Result<Method> {
        self.solver.scheme.parse().map_err(keyed("solver.scheme"))
    }

    pub fn rel_tol(&self) -> Result<f64> {
        let t = self.solver.rel_tol;
        if t > 0.0 && t <= 1e-6 {
            Ok(t)
        } else {
            Err(Error::config(
                "solver.rel_tol",
                format!("{t} is outside (0, 1e-6]"),
            ))
        }
    }

    /// The boundary value problem described by the file.
    pub fn system(&self) -> Result<WignerSystem> {
        let potential =
            FourierPotential::new(self.potential.period_l, self.potential.coeffs.clone()).map_err(
                |e| match self.potential.period_l {
                    l if l.is_finite() && l > 0.0 => keyed("potential.coeffs")(e),
                    _ => keyed("potential.period_l")(e),
                },
            )?;

        let ratio = self.grid.s_over_kappa;
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::config(
                "grid.s_over_kappa",
                format!("{ratio} must lie strictly between 0 and 1"),
            ));
        }
        if self.grid.m < 1 {
            return Err(Error::config(
                "grid.M",
                format!("{} must be at least 1", self.grid.m),
            ));
        }
        let kappa = potential.kappa();
        let grid = VelocityGrid::new(
            kappa,
            ratio * kappa,
            self.grid.m as usize,
            self.grid.symmetric,
        )
        .map_err(keyed("grid"))?;

        let nx = self.mesh.nx;
        if nx < 2 || nx % 2 != 0 {
            return Err(Error::config(
                "mesh.Nx",
                format!("{nx} is not an even integer >= 2"),
            ));
        }
        let mesh = SpatialMesh::new(potential.period_l(), nx as usize).map_err(keyed("mesh.Nx"))?;

        let b = &self.boundary;
        let boundary = match b.mode.as_str() {
            "mono" => {
                if b.table.is_some() {
                    return Err(Error::config(
                        "boundary.table",
                        "not used with mode = \"mono\"",
                    ));
                }
                let i0 = b
                    .i0
                    .ok_or_else(|| Error::config("boundary.i0", "required with mode = \"mono\""))?;
                BoundaryData::mono_energetic(&grid, i0).map_err(keyed("boundary.i0"))?
            }
            "table" => {
                if b.i0.is_some() {
                    return Err(Error::config(
                        "boundary.i0",
                        "not used with mode = \"table\"",
                    ));
                }
                let entries = b.table.as_ref().ok_or_else(|| {
                    Error::config("boundary.table", "required with mode = \"table\"")
                })?;
                let mut table = BTreeMap::new();
                for e in entries {
                    if table.insert(e.i, e.f).is_some() {
                        return Err(Error::config(
                            "boundary.table",
                            format!("index {} given twice", e.i),
                        ));
                    }
                }
                BoundaryData::tabulated(&grid, &table).map_err(keyed("boundary.table"))?
            }
            other => {
                return Err(Error::config(
                    "boundary.mode",
                    format!("`{other}` is neither \"mono\" nor \"table\""),
                ))
            }
        };

        WignerSystem::new(potential, grid, mesh, boundary)
    }

    pub fn emits(&self, what: Emit) -> bool {
        self.output.emit.contains(&what)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::Scheme;

    const PAPER: &str = r#"
        [potential]
        period_l = 1.0
        coeffs = [20.0, 20.0]
        [grid]
        s_over_kappa = 0.5
        M = 40
        symmetric = true
        [mesh]
        Nx = 100
        [boundary]
        mode = "mono"
        i0 = 0
        [solver]
        scheme = "central"
        rel_tol = 1e-12
    "#;

    fn key_of(text: &str) -> String {
        match RunConfig::from_toml_str(text) {
            Err(Error::Config { key, .. }) => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn parses_paper_setup() {
        let cfg = RunConfig::from_toml_str(PAPER).unwrap();
        let sys = cfg.system().unwrap();
        assert_eq!(sys.grid.len(), 80);
        assert_eq!(sys.mesh.nx(), 100);
        assert_eq!(cfg.method().unwrap(), Method::Fd(Scheme::Central));
        assert_eq!(cfg.output.emit, Emit::ALL.to_vec());
    }

    #[test]
    fn defaults_apply() {
        let text = r#"
            potential = { period_l = 2.0, coeffs = [0.0] }
            mesh = { Nx = 4 }
            boundary = { mode = "mono", i0 = 1 }
        "#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.solver, SolverConfig::default());
    }

    #[test]
    fn errors_name_the_key() {
        assert_eq!(
            key_of(&PAPER.replace("s_over_kappa = 0.5", "s_over_kappa = 0.0")),
            "grid.s_over_kappa"
        );
        assert_eq!(key_of(&PAPER.replace("Nx = 100", "Nx = 101")), "mesh.Nx");
        assert_eq!(key_of(&PAPER.replace("M = 40", "M = 0")), "grid.M");
        assert_eq!(key_of(&PAPER.replace("i0 = 0", "i0 = -1")), "boundary.i0");
        assert_eq!(
            key_of(&PAPER.replace("\"central\"", "\"spectral\"")),
            "solver.scheme"
        );
        assert_eq!(key_of(&PAPER.replace("1e-12", "1e-3")), "solver.rel_tol");
        assert_eq!(
            key_of(&PAPER.replace("period_l = 1.0", "period_l = -1.0")),
            "potential.period_l"
        );
        assert_eq!(
            key_of(&PAPER.replace("\"mono\"", "\"maxwell\"")),
            "boundary.mode"
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml_str(&PAPER.replace("M = 40", "M = 40\nMm = 3")).unwrap_err();
        assert!(err.to_string().contains("Mm"), "{err}");
    }

    #[test]
    fn tabulated_boundary() {
        let text = PAPER.replace(
            "mode = \"mono\"\n        i0 = 0",
            "mode = \"table\"\n        table = [{ i = 0, f = 1.0 }, { i = -1, f = 0.5 }]",
        );
        let sys = RunConfig::from_toml_str(&text).unwrap().system().unwrap();
        let b = sys.boundary.values();
        assert_eq!(b[sys.grid.position(0).unwrap()], 1.0);
        assert_eq!(b[sys.grid.position(-1).unwrap()], 0.5);
        let dup = text.replace("i = -1", "i = 0");
        assert_eq!(key_of(&dup), "boundary.table");
    }
}
