//! Transfer-operator oracle for `T f' = A(x) f`.
//!
//! On an interval `[x_a, x_b]` the initial value problem is the integral
//! equation `f(x) = f(x_a) + int_{x_a}^{x} T^{-1} A(y) f(y) dy`. With
//! `C = 2 sum |a_n|` the integral operator is a contraction whenever
//! `|x_b - x_a| < min|v| / C`, so the Picard iterates
//! `f^{(k+1)} = f(x_a) + K f^{(k)}` converge geometrically. Longer
//! intervals are split into pieces of at most `step_fraction * min|v| / C`
//! and the piece propagators are multiplied.
//!
//! The integral is evaluated with composite Simpson on `2P + 1` equispaced
//! nodes; odd nodes use the three-point rule `h/12 (5 g_0 + 8 g_1 - g_2)`.
//! Each piece is recomputed with doubled panels until the Richardson estimate
//! of the quadrature error falls below `picard_tol`.
//!
//! [`solve_bvp_shooting`] combines the full-domain propagator with the inflow
//! data: the outgoing components at `x = -l/2` solve a small dense system,
//! and the solution is then marched across the mesh.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kinetic::WignerSystem;
use crate::potential::FourierPotential;
use crate::solution::{DiscreteSolution, Method};

const MAX_PICARD_ITERATIONS: usize = 200;
const MAX_PANELS: usize = 2048;

/// Tuning of the Picard/quadrature machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorOptions {
    /// Piece length as a fraction of the contraction step, in (0, 1).
    pub step_fraction: f64,
    /// Stopping threshold on the relative H-norm gap between iterates.
    pub picard_tol: f64,
    /// Initial Simpson panels per piece.
    pub quad_panels: usize,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        PropagatorOptions {
            step_fraction: 0.5,
            picard_tol: 1e-13,
            quad_panels: 8,
        }
    }
}

impl PropagatorOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "step_fraction must lie in (0, 1), got {}",
                self.step_fraction
            )));
        }
        if !(self.picard_tol > 0.0 && self.picard_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "picard_tol must be positive, got {}",
                self.picard_tol
            )));
        }
        if self.quad_panels == 0 {
            return Err(Error::invalid("quad_panels must be positive"));
        }
        Ok(())
    }
}

/// Dense realisation of the propagator from `x1` to `x2` on the truncated
/// velocity space: `f(x2) = P f(x1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorMatrix {
    matrix: DMatrix<f64>,
    x1: f64,
    x2: f64,
}

impl PropagatorMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(f))
            .as_slice()
            .to_vec()
    }

    /// Propagator over `[x1, next.x2]` given `next` starting at `self.x2`.
    pub fn then(&self, next: &PropagatorMatrix) -> Result<PropagatorMatrix> {
        if next.x1 != self.x2 {
            return Err(Error::invalid(format!(
                "cannot chain [{}, {}] with [{}, {}]",
                self.x1, self.x2, next.x1, next.x2
            )));
        }
        Ok(PropagatorMatrix {
            matrix: &next.matrix * &self.matrix,
            x1: self.x1,
            x2: next.x2,
        })
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &PropagatorMatrix) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }
}

/// `min(s, kappa - s) / C`, or `+inf` when the potential does not couple.
pub fn contraction_step(system: &WignerSystem) -> f64 {
    let c = system.potential.coupling_bound();
    if c == 0.0 {
        f64::INFINITY
    } else {
        system.grid.min_speed() / c
    }
}

/// Applies `T^{-1} A(y)` column by column.
struct Kernel<'a> {
    potential: &'a FourierPotential,
    inv_v: Vec<f64>,
}

impl<'a> Kernel<'a> {
    fn new(system: &'a WignerSystem) -> Self {
        Kernel {
            potential: &system.potential,
            inv_v: system.grid.velocities().iter().map(|v| 1.0 / v).collect(),
        }
    }

    fn apply(&self, weights: &[f64], f: &DMatrix<f64>, out: &mut DMatrix<f64>) {
        let nv = f.nrows();
        for c in 0..f.ncols() {
            let col = f.column(c);
            let mut dst = out.column_mut(c);
            for p in 0..nv {
                let mut acc = 0.0;
                for (m, w) in weights.iter().enumerate() {
                    let n = m + 1;
                    let lo = if p >= n { col[p - n] } else { 0.0 };
                    let hi = if p + n < nv { col[p + n] } else { 0.0 };
                    acc += w * (lo - hi);
                }
                dst[p] = acc * self.inv_v[p];
            }
        }
    }
}

/// Picard iterates on one piece with a fixed quadrature grid.
struct PieceSolve {
    /// Iterate values at every quadrature node.
    nodes: Vec<DMatrix<f64>>,
    /// Relative gap of each iteration.
    gaps: Vec<f64>,
}

impl PieceSolve {
    fn end(&self) -> &DMatrix<f64> {
        self.nodes.last().expect("at least two nodes")
    }
}

fn column_scales(f0: &DMatrix<f64>) -> Vec<f64> {
    f0.column_iter()
        .map(|c| {
            let n = c.norm();
            if n > 0.0 {
                1.0 / n
            } else {
                0.0
            }
        })
        .collect()
}

fn picard_piece(
    kernel: &Kernel<'_>,
    f0: &DMatrix<f64>,
    xa: f64,
    xb: f64,
    panels: usize,
    tol: f64,
) -> Result<PieceSolve> {
    let count = 2 * panels + 1;
    let h = (xb - xa) / (2 * panels) as f64;
    let ys: Vec<f64> = (0..count)
        .map(|k| {
            if k + 1 == count {
                xb
            } else {
                xa + k as f64 * h
            }
        })
        .collect();
    let weights: Vec<Vec<f64>> = ys
        .iter()
        .map(|y| kernel.potential.coupling_weights(*y))
        .collect();
    let scales = column_scales(f0);
    let (nv, nc) = f0.shape();

    let mut current: Vec<DMatrix<f64>> = vec![f0.clone(); count];
    let mut g: Vec<DMatrix<f64>> = vec![DMatrix::zeros(nv, nc); count];
    let mut gaps = Vec::new();

    if weights.iter().all(|w| w.iter().all(|x| *x == 0.0)) || scales.iter().all(|s| *s == 0.0) {
        return Ok(PieceSolve {
            nodes: current,
            gaps: vec![0.0],
        });
    }

    for _ in 0..MAX_PICARD_ITERATIONS {
        for k in 0..count {
            kernel.apply(&weights[k], &current[k], &mut g[k]);
        }
        let mut next: Vec<DMatrix<f64>> = Vec::with_capacity(count);
        let mut integral = DMatrix::<f64>::zeros(nv, nc);
        next.push(f0.clone());
        for m in 0..panels {
            let (g0, g1, g2) = (&g[2 * m], &g[2 * m + 1], &g[2 * m + 2]);
            let odd = &integral + (g0 * 5.0 + g1 * 8.0 - g2) * (h / 12.0);
            integral += (g0 + g1 * 4.0 + g2) * (h / 3.0);
            next.push(f0 + odd);
            next.push(f0 + &integral);
        }
        let mut gap: f64 = 0.0;
        for (a, b) in next.iter().zip(&current) {
            for (c, scale) in scales.iter().enumerate() {
                gap = gap.max((a.column(c) - b.column(c)).norm() * scale);
            }
        }
        current = next;
        gaps.push(gap);
        if gap <= tol {
            return Ok(PieceSolve {
                nodes: current,
                gaps,
            });
        }
    }
    Err(Error::SolverFailure {
        message: format!(
            "Picard iteration on [{xa}, {xb}] did not converge in {MAX_PICARD_ITERATIONS} iterations"
        ),
        achieved: *gaps.last().unwrap_or(&f64::INFINITY),
    })
}

/// Runs a piece with `panels`, doubling until the Richardson estimate of the
/// quadrature error at the end point is below `picard_tol`. Returns the
/// finest solve and the panel count it used.
fn picard_piece_adaptive(
    kernel: &Kernel<'_>,
    f0: &DMatrix<f64>,
    xa: f64,
    xb: f64,
    panels: usize,
    opts: &PropagatorOptions,
) -> Result<(PieceSolve, usize)> {
    let scales = column_scales(f0);
    let mut panels = panels;
    let mut coarse = picard_piece(kernel, f0, xa, xb, panels, opts.picard_tol)?;
    loop {
        let fine = picard_piece(kernel, f0, xa, xb, 2 * panels, opts.picard_tol)?;
        let diff = fine.end() - coarse.end();
        let est = diff
            .column_iter()
            .zip(&scales)
            .map(|(c, s)| c.norm() * s)
            .fold(0.0, f64::max)
            / 15.0;
        panels *= 2;
        if est <= opts.picard_tol || panels >= MAX_PANELS {
            return Ok((fine, panels));
        }
        coarse = fine;
    }
}

fn check_interval(system: &WignerSystem, x1: f64, x2: f64) -> Result<()> {
    let half = 0.5 * system.potential.period_l();
    for x in [x1, x2] {
        if !(x >= -half && x <= half) {
            return Err(Error::invalid(format!(
                "x = {x} lies outside the device [{}, {half}]",
                -half
            )));
        }
    }
    Ok(())
}

fn max_piece_length(system: &WignerSystem, opts: &PropagatorOptions) -> f64 {
    opts.step_fraction * contraction_step(system)
}

fn propagate_columns(
    system: &WignerSystem,
    f0: DMatrix<f64>,
    x1: f64,
    x2: f64,
    opts: &PropagatorOptions,
) -> Result<DMatrix<f64>> {
    opts.validate()?;
    check_interval(system, x1, x2)?;
    if x1 == x2 {
        return Ok(f0);
    }
    let kernel = Kernel::new(system);
    let len = (x2 - x1).abs();
    let pieces = (len / max_piece_length(system, opts)).ceil().max(1.0) as usize;
    let mut f = f0;
    for s in 0..pieces {
        let xa = x1 + (x2 - x1) * s as f64 / pieces as f64;
        let xb = if s + 1 == pieces {
            x2
        } else {
            x1 + (x2 - x1) * (s + 1) as f64 / pieces as f64
        };
        let (solve, _) = picard_piece_adaptive(&kernel, &f, xa, xb, opts.quad_panels, opts)?;
        f = solve.end().clone();
    }
    Ok(f)
}

/// Approximates `f(x2)` for the solution of `T f' = A f` with `f(x1) = f_start`.
pub fn picard_propagate(
    system: &WignerSystem,
    f_start: &[f64],
    x1: f64,
    x2: f64,
    opts: &PropagatorOptions,
) -> Result<Vec<f64>> {
    if f_start.len() != system.grid.len() {
        return Err(Error::invalid(format!(
            "start vector has {} entries, grid has {}",
            f_start.len(),
            system.grid.len()
        )));
    }
    let f0 = DMatrix::from_column_slice(f_start.len(), 1, f_start);
    Ok(propagate_columns(system, f0, x1, x2, opts)?
        .as_slice()
        .to_vec())
}

/// Dense propagator over `[x1, x2]`; column `k` is the propagation of `e_k`.
pub fn propagator_matrix(
    system: &WignerSystem,
    x1: f64,
    x2: f64,
    opts: &PropagatorOptions,
) -> Result<PropagatorMatrix> {
    let nv = system.grid.len();
    let matrix = propagate_columns(system, DMatrix::identity(nv, nv), x1, x2, opts)?;
    Ok(PropagatorMatrix { matrix, x1, x2 })
}

/// Relative Picard gaps of the first piece of `[x1, x2]` at the initial
/// panel count, for inspecting the contraction rate.
pub fn picard_gaps(
    system: &WignerSystem,
    f_start: &[f64],
    x1: f64,
    x2: f64,
    opts: &PropagatorOptions,
) -> Result<Vec<f64>> {
    opts.validate()?;
    check_interval(system, x1, x2)?;
    let kernel = Kernel::new(system);
    let f0 = DMatrix::from_column_slice(f_start.len(), 1, f_start);
    let len = (x2 - x1).abs();
    let pieces = (len / max_piece_length(system, opts)).ceil().max(1.0) as usize;
    let xb = x1 + (x2 - x1) / pieces as f64;
    Ok(picard_piece(&kernel, &f0, x1, xb, opts.quad_panels, opts.picard_tol)?.gaps)
}

/// A stretch of the mesh handled by one Picard solve.
struct Piece {
    xa: f64,
    xb: f64,
    /// Mesh node at `xa`, if any.
    first_node: Option<usize>,
    /// Whole mesh cells covered (0 for a fraction of a cell).
    cells: usize,
    /// Mesh node at `xb`, if any.
    end_node: Option<usize>,
}

fn mesh_pieces(system: &WignerSystem, opts: &PropagatorOptions) -> Vec<Piece> {
    let mesh = &system.mesh;
    let nx = mesh.nx();
    let dx = mesh.dx();
    let lmax = max_piece_length(system, opts);
    let mut pieces = Vec::new();
    if dx <= lmax {
        let per = ((lmax / dx).floor() as usize).clamp(1, nx);
        let mut j = 0;
        while j < nx {
            let cells = per.min(nx - j);
            pieces.push(Piece {
                xa: mesh.node(j),
                xb: mesh.node(j + cells),
                first_node: Some(j),
                cells,
                end_node: Some(j + cells),
            });
            j += cells;
        }
    } else {
        let split = (dx / lmax).ceil() as usize;
        for j in 0..nx {
            let (a, b) = (mesh.node(j), mesh.node(j + 1));
            for s in 0..split {
                pieces.push(Piece {
                    xa: if s == 0 {
                        a
                    } else {
                        a + (b - a) * s as f64 / split as f64
                    },
                    xb: if s + 1 == split {
                        b
                    } else {
                        a + (b - a) * (s + 1) as f64 / split as f64
                    },
                    first_node: (s == 0).then_some(j),
                    cells: 0,
                    end_node: (s + 1 == split).then_some(j + 1),
                });
            }
        }
    }
    pieces
}

/// Solves the boundary value problem by shooting with the propagator.
pub fn solve_bvp_shooting(
    system: &WignerSystem,
    opts: &PropagatorOptions,
) -> Result<DiscreteSolution> {
    opts.validate()?;
    let nv = system.grid.len();
    let nx = system.mesh.nx();
    let n_neg = system.grid.negative_count();
    let mut values = vec![0.0; nv * (nx + 1)];
    if system.boundary.is_zero() {
        return Ok(DiscreteSolution::new(
            values,
            system.clone(),
            Method::Oracle,
            0.0,
        ));
    }

    let kernel = Kernel::new(system);
    let pieces = mesh_pieces(system, opts);

    // Pass 1: piece propagators, with panels chosen per piece.
    let mut cached: Vec<(DMatrix<f64>, usize)> = Vec::with_capacity(pieces.len());
    let mut total = DMatrix::<f64>::identity(nv, nv);
    for piece in &pieces {
        let base = if piece.cells > 0 {
            opts.quad_panels.div_ceil(piece.cells) * piece.cells
        } else {
            opts.quad_panels
        };
        let (solve, panels) = picard_piece_adaptive(
            &kernel,
            &DMatrix::identity(nv, nv),
            piece.xa,
            piece.xb,
            base,
            opts,
        )?;
        total = solve.end() * &total;
        cached.push((solve.end().clone(), panels));
    }

    // f(l/2) = P f(-l/2); the rows with v < 0 give P_-- u = b_- - P_-+ b_+
    // for the unknown outgoing data u = f_-(-l/2).
    let b = system.boundary.values();
    let b_pos = DVector::from_column_slice(&b[n_neg..]);
    let b_neg = DVector::from_column_slice(&b[..n_neg]);
    let p_nn = total.view((0, 0), (n_neg, n_neg)).into_owned();
    let p_np = total.view((0, n_neg), (n_neg, nv - n_neg));
    let rhs = &b_neg - p_np * &b_pos;
    let u = p_nn
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SolverFailure {
            message: "singular reduced shooting system".into(),
            achieved: f64::INFINITY,
        })?;
    let residual = (&p_nn * &u - &rhs).norm() / rhs.norm().max(1e-300);

    // Pass 2: march across the mesh; interior nodes of multi-cell pieces come
    // from a vector Picard solve on the cached quadrature grid.
    let mut f = DVector::<f64>::zeros(nv);
    f.rows_mut(0, n_neg).copy_from(&u);
    f.rows_mut(n_neg, nv - n_neg).copy_from(&b_pos);
    values[..nv].copy_from_slice(f.as_slice());
    for (piece, (matrix, panels)) in pieces.iter().zip(&cached) {
        if piece.cells > 1 {
            let start = DMatrix::from_column_slice(nv, 1, f.as_slice());
            let solve = picard_piece(
                &kernel,
                &start,
                piece.xa,
                piece.xb,
                *panels,
                opts.picard_tol,
            )?;
            let stride = 2 * panels / piece.cells;
            let j0 = piece.first_node.expect("multi-cell pieces start on a node");
            for c in 1..piece.cells {
                let j = j0 + c;
                values[j * nv..(j + 1) * nv].copy_from_slice(solve.nodes[c * stride].as_slice());
            }
        }
        f = matrix * &f;
        if let Some(j) = piece.end_node {
            values[j * nv..(j + 1) * nv].copy_from_slice(f.as_slice());
        }
    }
    // Pin the inflow entries to the data exactly.
    for (p, v) in system.boundary.left_inflow() {
        values[p] = v;
    }
    for (p, v) in system.boundary.right_inflow() {
        values[nx * nv + p] = v;
    }
    Ok(DiscreteSolution::new(
        values,
        system.clone(),
        Method::Oracle,
        residual,
    ))
}
