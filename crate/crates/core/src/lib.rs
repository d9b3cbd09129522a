//! Discrete-velocity solvers for the stationary Wigner equation with inflow
//! boundary conditions and periodic even potentials.
//!
//! A potential `V(x) = a_0 + sum a_n cos(2 n kappa x)` reduces the Wigner
//! equation on the lattice `v_i = i kappa + s` to the linear system
//! `T f' = A(x) f` with diagonal `T` and skew-symmetric `A(x)`, under inflow
//! data at `x = -l/2` (for `v > 0`) and `x = l/2` (for `v < 0`).
//!
//! * [`potential`] and [`kinetic`] build the problem.
//! * [`fd`] solves it with first/second order upwind and central differences.
//! * [`propagator`] is an independent oracle: Picard iteration for the
//!   transfer operator plus shooting on the inflow data.
//! * [`analysis`] computes density, current, the mirror-symmetry error and
//!   mesh refinement studies; [`csv`] writes them out.
//! * [`config`], [`verify`] and [`cli`] back the `wigner` binary.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod csv;
pub mod error;
pub mod fd;
pub mod kinetic;
pub mod linalg;
pub mod potential;
pub mod propagator;
pub mod solution;
pub mod verify;

pub use error::{Error, Result};
pub use fd::{assemble, residual_norm, solve_bvp, LinearProblem, DEFAULT_REL_TOL};
pub use kinetic::{weighted_norm, BoundaryData, SpatialMesh, VelocityGrid, Weight, WignerSystem};
pub use potential::FourierPotential;
pub use solution::{DiscreteSolution, Method, Scheme};
