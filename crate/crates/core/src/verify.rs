//! Executable property checks on a configured system: the coupling bound,
//! mirror symmetry and invertibility of the propagator, free streaming and
//! current conservation.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{current_deviation, solve_with};
use crate::error::Result;
use crate::kinetic::{BoundaryData, WignerSystem};
use crate::potential::FourierPotential;
use crate::propagator::{propagator_matrix, PropagatorOptions};
use crate::solution::{Method, Scheme};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance of the propagator checks.
    pub tol: f64,
    /// Tolerance of the free-streaming check.
    pub free_tol: f64,
    /// Relative residual requested from the difference solvers.
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-8,
            free_tol: 1e-12,
            rel_tol: crate::fd::DEFAULT_REL_TOL,
            seed: 20,
        }
    }
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<22} {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<PropertyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `||A(x) f||_2 <= 2 sum_{n>=1} |a_n|` for random unit `f` and random `x`.
pub fn check_coupling_bound(
    system: &WignerSystem,
    vectors: usize,
    points: usize,
    seed: u64,
) -> Result<PropertyCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = system.potential.coupling_bound();
    let half = 0.5 * system.potential.period_l();
    let nv = system.grid.len();
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..points {
        let x = rng.random_range(-half..=half);
        for _ in 0..vectors {
            let mut f: Vec<f64> = (0..nv).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            f.iter_mut().for_each(|v| *v /= norm);
            let af = system.potential.apply_coupling(&system.grid, x, &f)?;
            let n = af.iter().map(|v| v * v).sum::<f64>().sqrt();
            worst = worst.max(n);
            if n > bound {
                violations += 1;
            }
        }
    }
    Ok(PropertyCheck {
        name: "coupling bound",
        passed: violations == 0,
        detail: format!(
            "max ||A f|| = {worst:.6e} vs bound {bound:.6e}, {violations} violations in {} samples",
            vectors * points
        ),
    })
}

/// `max |P[0,x] - P[0,-x]|` over `x = l * {0.05, 0.15, 0.25, 0.45}`.
pub fn check_propagator_symmetry(system: &WignerSystem, tol: f64) -> Result<PropertyCheck> {
    let opts = PropagatorOptions::default();
    let l = system.potential.period_l();
    let mut worst: f64 = 0.0;
    for frac in [0.05, 0.15, 0.25, 0.45] {
        let fwd = propagator_matrix(system, 0.0, frac * l, &opts)?;
        let bwd = propagator_matrix(system, 0.0, -frac * l, &opts)?;
        worst = worst.max(fwd.max_abs_diff(&bwd));
    }
    Ok(PropertyCheck {
        name: "propagator symmetry",
        passed: worst <= tol,
        detail: format!("max |P[0,x] - P[0,-x]| = {worst:.3e} (tol {tol:.1e})"),
    })
}

/// Random sub-intervals of length at most `l / 2` inside the device.
pub fn random_intervals(system: &WignerSystem, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = system.potential.period_l();
    let half = 0.5 * l;
    (0..count)
        .map(|_| {
            let x1: f64 = rng.random_range(-half..=half);
            let len = rng.random_range(0.0..=0.5 * l);
            let dir = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let x2 = x1 + dir * len;
            if (-half..=half).contains(&x2) {
                (x1, x2)
            } else {
                (x1, x1 - dir * len)
            }
        })
        .collect()
}

/// `max |P[x1,x2] P[x2,x1] - I|` over three random sub-intervals.
pub fn check_inversion(system: &WignerSystem, tol: f64, seed: u64) -> Result<PropertyCheck> {
    let opts = PropagatorOptions::default();
    let nv = system.grid.len();
    let mut worst: f64 = 0.0;
    let intervals = random_intervals(system, 3, seed);
    for &(x1, x2) in &intervals {
        let there = propagator_matrix(system, x1, x2, &opts)?;
        let back = propagator_matrix(system, x2, x1, &opts)?;
        let round = there.then(&back)?;
        worst = worst.max((round.matrix() - DMatrix::<f64>::identity(nv, nv)).amax());
    }
    Ok(PropertyCheck {
        name: "propagator inversion",
        passed: worst <= tol,
        detail: format!("max |P P^-1 - I| = {worst:.3e} over {intervals:.3?} (tol {tol:.1e})"),
    })
}

/// The configured grid and mesh with `V = 0` and unit injection at `i = 0`.
pub fn free_streaming_system(system: &WignerSystem) -> Result<WignerSystem> {
    let potential = FourierPotential::new(system.potential.period_l(), vec![0.0])?;
    let boundary = BoundaryData::mono_energetic(&system.grid, 0)?;
    WignerSystem::new(
        potential,
        system.grid.clone(),
        system.mesh.clone(),
        boundary,
    )
}

/// Without a potential every method must carry the injected unit value
/// across the device, and the full propagator must be the identity.
pub fn check_free_streaming(
    system: &WignerSystem,
    tol: f64,
    rel_tol: f64,
) -> Result<PropertyCheck> {
    let free = free_streaming_system(system)?;
    let p0 = free.grid.position(0).expect("i = 0 lies in every lattice");
    let mut parts = Vec::new();
    let mut passed = true;
    let methods = Scheme::ALL
        .map(Method::Fd)
        .into_iter()
        .chain([Method::Oracle]);
    for method in methods {
        let sol = solve_with(&free, method, rel_tol)?;
        let dev = (0..=sol.nx())
            .map(|j| (sol.at(p0, j) - 1.0).abs())
            .fold(0.0, f64::max);
        passed &= dev < tol;
        parts.push(format!("{method} {dev:.1e}"));
    }
    let half = 0.5 * free.potential.period_l();
    let p = propagator_matrix(&free, -half, half, &PropagatorOptions::default())?;
    let identity = *p.matrix() == DMatrix::<f64>::identity(free.grid.len(), free.grid.len());
    passed &= identity;
    Ok(PropertyCheck {
        name: "free streaming",
        passed,
        detail: format!(
            "max |f_0 - 1|: {}; propagator {} the identity",
            parts.join(", "),
            if identity { "is" } else { "is not" }
        ),
    })
}

/// The current deviation must shrink from `Nx` to `4 Nx`, unless it already
/// sits at round-off level (below `1e-10`).
pub fn check_current(system: &WignerSystem, method: Method, rel_tol: f64) -> Result<PropertyCheck> {
    const ROUNDOFF: f64 = 1e-10;
    let nx = system.mesh.nx();
    let coarse = current_deviation(&solve_with(system, method, rel_tol)?);
    let fine = current_deviation(&solve_with(&system.with_mesh(4 * nx)?, method, rel_tol)?);
    Ok(PropertyCheck {
        name: "current conservation",
        passed: fine < coarse || fine <= ROUNDOFF,
        detail: format!(
            "{method}: max |J - J_0| / |J_0| = {coarse:.3e} at Nx = {nx}, {fine:.3e} at Nx = {}",
            4 * nx
        ),
    })
}

/// Runs every property on `system`; `method` selects the solver for the
/// current check.
pub fn run_all(
    system: &WignerSystem,
    method: Method,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    Ok(VerifyReport {
        checks: vec![
            check_coupling_bound(system, 100, 10, opts.seed)?,
            check_propagator_symmetry(system, opts.tol)?,
            check_inversion(system, opts.tol, opts.seed)?,
            check_free_streaming(system, opts.free_tol, opts.rel_tol)?,
            check_current(system, method, opts.rel_tol)?,
        ],
    })
}
