//! Observables and diagnostics on computed Wigner functions, plus mesh
//! refinement studies.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fd::solve_bvp;
use crate::kinetic::WignerSystem;
use crate::propagator::{solve_bvp_shooting, PropagatorOptions};
use crate::solution::{DiscreteSolution, Method};

/// `n(x_j) = sum_i f_{i,j}`.
pub fn density(sol: &DiscreteSolution) -> Vec<f64> {
    (0..=sol.nx()).map(|j| sol.node(j).iter().sum()).collect()
}

/// `J(x_j) = sum_i v_i f_{i,j}`.
pub fn current(sol: &DiscreteSolution) -> Vec<f64> {
    let v = sol.system().grid.velocities();
    (0..=sol.nx())
        .map(|j| sol.node(j).iter().zip(v).map(|(f, v)| f * v).sum())
        .collect()
}

/// `max_j |J_j - J_0| / |J_0|`; zero when the current vanishes identically.
pub fn current_deviation(sol: &DiscreteSolution) -> f64 {
    let j = current(sol);
    let j0 = j[0];
    let dev = j.iter().map(|x| (x - j0).abs()).fold(0.0, f64::max);
    if j0 == 0.0 {
        if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        dev / j0.abs()
    }
}

/// `sum_i sum_{j=0}^{Nx} |f_{i,j} - f_{i,Nx-j}| dx`, the discrete L1 distance
/// between the solution and its spatial mirror image. Every node carries the
/// full weight `dx`, endpoints included.
pub fn symmetry_error(sol: &DiscreteSolution) -> f64 {
    let nx = sol.nx();
    let mut acc = 0.0;
    for j in 0..=nx {
        for (a, b) in sol.node(j).iter().zip(sol.node(nx - j)) {
            acc += (a - b).abs();
        }
    }
    acc * sol.system().mesh.dx()
}

/// `sum |f_{i,j}| dx`.
pub fn total_mass(sol: &DiscreteSolution) -> f64 {
    sol.values().iter().map(|f| f.abs()).sum::<f64>() * sol.system().mesh.dx()
}

/// L1 distance `sum |a - b| dx` on the coarser of the two meshes. The finer
/// mesh must refine the coarser one by an integer factor.
pub fn scheme_difference(a: &DiscreteSolution, b: &DiscreteSolution) -> Result<f64> {
    let (sa, sb) = (a.system(), b.system());
    if sa.grid != sb.grid || sa.potential != sb.potential || sa.boundary != sb.boundary {
        return Err(Error::invalid("solutions belong to different systems"));
    }
    let (coarse, fine) = if a.nx() <= b.nx() { (a, b) } else { (b, a) };
    if fine.nx() % coarse.nx() != 0 {
        return Err(Error::invalid(format!(
            "meshes with Nx = {} and Nx = {} do not nest",
            coarse.nx(),
            fine.nx()
        )));
    }
    let ratio = fine.nx() / coarse.nx();
    let mut acc = 0.0;
    for j in 0..=coarse.nx() {
        for (x, y) in coarse.node(j).iter().zip(fine.node(j * ratio)) {
            acc += (x - y).abs();
        }
    }
    Ok(acc * coarse.system().mesh.dx())
}

/// One solve of a refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub method: Method,
    pub nx: usize,
    /// `NaN` when the solve failed.
    pub symmetry_error: f64,
    pub runtime_seconds: f64,
    pub residual: f64,
    pub error: Option<String>,
}

/// Results of a refinement study, grouped by method in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    pub system_descriptor: String,
}

impl StudyReport {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &StudyRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    /// Appends the rows of another study on the same system.
    pub fn extend(&mut self, other: StudyReport) {
        self.rows.extend(other.rows);
    }
}

/// Solves `system` on every mesh in `nx_list` with `method`, recording the
/// symmetry error, wall-clock time of assembly plus solve, and residual.
/// A failing solve is recorded in its row and does not abort the study.
pub fn convergence_study(
    system: &WignerSystem,
    method: Method,
    nx_list: &[usize],
    rel_tol: f64,
) -> Result<StudyReport> {
    if nx_list.is_empty() {
        return Err(Error::invalid("Nx list is empty"));
    }
    if let Some(nx) = nx_list.iter().find(|n| **n < 2 || **n % 2 != 0) {
        return Err(Error::invalid(format!(
            "Nx = {nx} is not an even integer >= 2"
        )));
    }
    if nx_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("Nx list must be strictly increasing"));
    }

    let mut rows = Vec::with_capacity(nx_list.len());
    for &nx in nx_list {
        let sys = system.with_mesh(nx)?;
        let start = Instant::now();
        let outcome = solve_with(&sys, method, rel_tol);
        let runtime_seconds = start.elapsed().as_secs_f64();
        rows.push(match outcome {
            Ok(sol) => StudyRow {
                method,
                nx,
                symmetry_error: symmetry_error(&sol),
                runtime_seconds,
                residual: sol.residual(),
                error: None,
            },
            Err(e) => StudyRow {
                method,
                nx,
                symmetry_error: f64::NAN,
                runtime_seconds,
                residual: match &e {
                    Error::SolverFailure { achieved, .. } => *achieved,
                    _ => f64::NAN,
                },
                error: Some(e.to_string()),
            },
        });
    }
    Ok(StudyReport {
        rows,
        system_descriptor: system.describe(),
    })
}

/// Dispatches to a difference scheme or to the shooting oracle (default options).
pub fn solve_with(system: &WignerSystem, method: Method, rel_tol: f64) -> Result<DiscreteSolution> {
    match method {
        Method::Fd(scheme) => solve_bvp(system, scheme, rel_tol),
        Method::Oracle => solve_bvp_shooting(system, &PropagatorOptions::default()),
    }
}
