//! Global finite-difference systems for the three schemes.
//!
//! Every equation is divided by `|v_i| / dx`, so the transport stencil has
//! unit coefficients and the coupling enters as `(dx / |v_i|) g_{i,j}`.
//! Unknowns are ordered node by node with velocity as the fast index; the
//! inflow-pinned entries (`v > 0` at node 0, `v < 0` at node `Nx`) are moved
//! to the right-hand side. Each equation is stored in the row of the unknown
//! it marches towards, which keeps the matrix block tridiagonal over nodes
//! (over pairs of nodes for the second-order upwind stencil).

use crate::error::{Error, Result};
use crate::kinetic::WignerSystem;
use crate::linalg::{norm2, solve_block_tridiagonal, CsrBuilder, CsrMatrix};
use crate::solution::{DiscreteSolution, Method, Scheme};

/// Default relative residual target.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

const MAX_REFINEMENTS: usize = 4;

/// Maps `(velocity position, node)` to an unknown index, skipping pinned entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownLayout {
    nv: usize,
    nx: usize,
    n_neg: usize,
}

impl UnknownLayout {
    pub fn new(system: &WignerSystem) -> Self {
        UnknownLayout {
            nv: system.grid.len(),
            nx: system.mesh.nx(),
            n_neg: system.grid.negative_count(),
        }
    }

    pub fn len(&self) -> usize {
        self.nv * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// First unknown belonging to node `j`.
    pub fn node_offset(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.n_neg + (j - 1) * self.nv
        }
    }

    pub fn index(&self, p: usize, j: usize) -> Option<usize> {
        if j == 0 {
            (p < self.n_neg).then_some(p)
        } else if j == self.nx {
            (p >= self.n_neg).then(|| self.node_offset(j) + p - self.n_neg)
        } else {
            Some(self.node_offset(j) + p)
        }
    }

    fn positions(&self, j: usize) -> std::ops::Range<usize> {
        if j == 0 {
            0..self.n_neg
        } else if j == self.nx {
            self.n_neg..self.nv
        } else {
            0..self.nv
        }
    }

    fn block_bounds(&self, nodes_per_block: usize) -> Vec<usize> {
        let mut bounds: Vec<usize> = (0..=self.nx)
            .step_by(nodes_per_block)
            .map(|j| self.node_offset(j))
            .collect();
        bounds.push(self.len());
        bounds.dedup();
        bounds
    }
}

/// Assembled sparse system `matrix * u = rhs`.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub layout: UnknownLayout,
    pub scheme: Scheme,
    block_bounds: Vec<usize>,
}

impl LinearProblem {
    /// Block partition (by node, or node pairs) under which the matrix is block tridiagonal.
    pub fn block_bounds(&self) -> &[usize] {
        &self.block_bounds
    }
}

struct RowWriter<'a> {
    system: &'a WignerSystem,
    layout: UnknownLayout,
    weights: &'a [Vec<f64>],
    builder: CsrBuilder,
    rhs_entry: f64,
}

impl RowWriter<'_> {
    fn term(&mut self, p: usize, j: usize, coeff: f64) {
        match self.layout.index(p, j) {
            Some(c) => self.builder.push(c, coeff),
            None => self.rhs_entry -= coeff * self.system.boundary.values()[p],
        }
    }

    /// Adds `factor * g_{p,j}` with `g_{p,j} = sum_n w_n(x_j) (f_{p-n,j} - f_{p+n,j})`.
    fn coupling(&mut self, p: usize, j: usize, factor: f64) {
        let nv = self.layout.nv;
        let weights = self.weights;
        for (m, w) in weights[j].iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            let n = m + 1;
            if p >= n {
                self.term(p - n, j, factor * w);
            }
            if p + n < nv {
                self.term(p + n, j, -factor * w);
            }
        }
    }

    fn finish(&mut self, rhs: &mut Vec<f64>) {
        self.builder.finish_row();
        rhs.push(self.rhs_entry);
        self.rhs_entry = 0.0;
    }
}

/// Builds the sparse system for `scheme`.
pub fn assemble(system: &WignerSystem, scheme: Scheme) -> LinearProblem {
    let layout = UnknownLayout::new(system);
    let nx = layout.nx;
    let dx = system.mesh.dx();
    let velocities = system.grid.velocities();
    let weights: Vec<Vec<f64>> = system
        .mesh
        .nodes()
        .iter()
        .map(|&x| system.potential.coupling_weights(x))
        .collect();
    let harmonics = system.potential.max_harmonic();
    let per_row = 3 + 4 * harmonics;

    let mut writer = RowWriter {
        system,
        layout,
        weights: &weights,
        builder: CsrBuilder::with_capacity(layout.len(), layout.len(), layout.len() * per_row),
        rhs_entry: 0.0,
    };
    let mut rhs = Vec::with_capacity(layout.len());

    for j in 0..=nx {
        for p in layout.positions(j) {
            let v = velocities[p];
            let w = dx / v.abs();
            // Upstream neighbour direction: -1 for v > 0, +1 for v < 0.
            let up = |k: usize| if v > 0.0 { j - k } else { j + k };
            let room = if v > 0.0 { j } else { nx - j };
            match scheme {
                Scheme::Upwind1 => {
                    writer.term(p, j, 1.0);
                    writer.term(p, up(1), -1.0);
                    writer.coupling(p, j, -w);
                }
                Scheme::Upwind2 if room >= 2 => {
                    writer.term(p, j, 1.5);
                    writer.term(p, up(1), -2.0);
                    writer.term(p, up(2), 0.5);
                    writer.coupling(p, j, -w);
                }
                Scheme::Upwind2 => {
                    writer.term(p, j, 1.0);
                    writer.term(p, up(1), -1.0);
                    writer.coupling(p, j, -w);
                }
                Scheme::Central => {
                    writer.term(p, j, 1.0);
                    writer.term(p, up(1), -1.0);
                    writer.coupling(p, j, -0.5 * w);
                    writer.coupling(p, up(1), -0.5 * w);
                }
            }
            writer.finish(&mut rhs);
        }
    }

    let nodes_per_block = match scheme {
        Scheme::Upwind2 => 2,
        Scheme::Upwind1 | Scheme::Central => 1,
    };
    LinearProblem {
        matrix: writer.builder.build(),
        rhs,
        layout,
        scheme,
        block_bounds: layout.block_bounds(nodes_per_block),
    }
}

/// `||M u - b||_2 / max(||b||_2, 1e-300)`.
pub fn residual_norm(problem: &LinearProblem, candidate: &[f64]) -> Result<f64> {
    if candidate.len() != problem.matrix.ncols() {
        return Err(Error::invalid(format!(
            "candidate has {} entries, system has {} unknowns",
            candidate.len(),
            problem.matrix.ncols()
        )));
    }
    Ok(norm2(&residual_vector(problem, candidate)) / norm2(&problem.rhs).max(1e-300))
}

fn residual_vector(problem: &LinearProblem, u: &[f64]) -> Vec<f64> {
    let mut r = problem.matrix.mul_vec(u);
    for (ri, bi) in r.iter_mut().zip(&problem.rhs) {
        *ri = bi - *ri;
    }
    r
}

/// Solves the assembled system, refining iteratively until the relative
/// residual is at most `rel_tol`.
// Negated comparisons keep NaN residuals on the failure path.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn solve_linear(problem: &LinearProblem, rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    let bnorm = norm2(&problem.rhs).max(1e-300);
    let mut u = solve_block_tridiagonal(&problem.matrix, problem.block_bounds(), &problem.rhs)?;
    let mut r = residual_vector(problem, &u);
    let mut rel = norm2(&r) / bnorm;
    for _ in 0..MAX_REFINEMENTS {
        if rel <= rel_tol {
            break;
        }
        let du = solve_block_tridiagonal(&problem.matrix, problem.block_bounds(), &r)?;
        let trial: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + b).collect();
        let r_trial = residual_vector(problem, &trial);
        let rel_trial = norm2(&r_trial) / bnorm;
        if !(rel_trial < rel) {
            break;
        }
        u = trial;
        r = r_trial;
        rel = rel_trial;
    }
    if !(rel <= rel_tol) {
        return Err(Error::SolverFailure {
            message: format!(
                "{} system with {} unknowns stalled above rel_tol {rel_tol:e}",
                problem.scheme,
                problem.layout.len()
            ),
            achieved: rel,
        });
    }
    Ok((u, rel))
}

/// Solves the boundary value problem with a finite-difference scheme.
pub fn solve_bvp(system: &WignerSystem, scheme: Scheme, rel_tol: f64) -> Result<DiscreteSolution> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-6) {
        return Err(Error::invalid(format!(
            "rel_tol must lie in (0, 1e-6], got {rel_tol}"
        )));
    }
    let nv = system.grid.len();
    let nx = system.mesh.nx();
    let mut values = vec![0.0; nv * (nx + 1)];
    if system.boundary.is_zero() {
        return Ok(DiscreteSolution::new(
            values,
            system.clone(),
            Method::Fd(scheme),
            0.0,
        ));
    }

    let problem = assemble(system, scheme);
    let (u, residual) = solve_linear(&problem, rel_tol)?;

    let layout = problem.layout;
    for j in 0..=nx {
        for p in 0..nv {
            values[j * nv + p] = match layout.index(p, j) {
                Some(k) => u[k],
                None => system.boundary.values()[p],
            };
        }
    }
    Ok(DiscreteSolution::new(
        values,
        system.clone(),
        Method::Fd(scheme),
        residual,
    ))
}
