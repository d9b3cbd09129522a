use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::kinetic::WignerSystem;

/// Finite-difference discretisation of `v f'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Upwind1,
    Upwind2,
    Central,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Upwind1, Scheme::Upwind2, Scheme::Central];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Upwind1 => "upwind1",
            Scheme::Upwind2 => "upwind2",
            Scheme::Central => "central",
        }
    }
}

/// How a solution was produced: one of the difference schemes or the
/// propagator/shooting oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fd(Scheme),
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fd(s) => s.name(),
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upwind1" => Ok(Method::Fd(Scheme::Upwind1)),
            "upwind2" => Ok(Method::Fd(Scheme::Upwind2)),
            "central" => Ok(Method::Fd(Scheme::Central)),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::invalid(format!(
                "unknown scheme `{other}` (expected upwind1, upwind2, central or oracle)"
            ))),
        }
    }
}

/// Wigner function values `f_{i,j}` on velocity x space nodes.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    /// Space-major: entry `j * nv + p` is velocity position `p` at node `j`.
    values: Vec<f64>,
    system: WignerSystem,
    method: Method,
    residual: f64,
}

impl DiscreteSolution {
    pub(crate) fn new(
        values: Vec<f64>,
        system: WignerSystem,
        method: Method,
        residual: f64,
    ) -> Self {
        debug_assert_eq!(values.len(), system.grid.len() * (system.mesh.nx() + 1));
        DiscreteSolution {
            values,
            system,
            method,
            residual,
        }
    }

    /// Wraps externally produced values (for example read back from CSV).
    /// The residual is unknown and reported as `NaN`.
    pub fn from_values(
        values: Vec<f64>,
        system: WignerSystem,
        method: Method,
    ) -> Result<Self, Error> {
        let expected = system.grid.len() * (system.mesh.nx() + 1);
        if values.len() != expected {
            return Err(Error::invalid(format!(
                "{} values given, the system has {expected} grid points",
                values.len()
            )));
        }
        Ok(Self::new(values, system, method, f64::NAN))
    }

    pub fn system(&self) -> &WignerSystem {
        &self.system
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Relative residual of the linear system the solution was taken from
    /// (zero for the oracle and for trivially zero data).
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn nv(&self) -> usize {
        self.system.grid.len()
    }

    pub fn nx(&self) -> usize {
        self.system.mesh.nx()
    }

    /// `f` at velocity position `p` and node `j`.
    pub fn at(&self, p: usize, j: usize) -> f64 {
        self.values[j * self.nv() + p]
    }

    /// All velocity values at node `j`.
    pub fn node(&self, j: usize) -> &[f64] {
        let nv = self.nv();
        &self.values[j * nv..(j + 1) * nv]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
