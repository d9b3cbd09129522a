//! Discrete velocity lattice, spatial mesh and inflow data: the pieces of a
//! fully specified boundary value problem `T f' = A(x) f` on `[-l/2, l/2]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::potential::FourierPotential;

/// Truncated lattice `v_i = i kappa + s` for `i` in `[i_min, i_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    s: f64,
    kappa: f64,
    i_min: i64,
    i_max: i64,
    velocities: Vec<f64>,
}

impl VelocityGrid {
    /// With `symmetric` set and `s == kappa / 2` the index range is
    /// `[-M, M-1]`, which makes the velocity set closed under `v -> -v`.
    /// Otherwise the range is `[-M, M]`.
    pub fn new(kappa: f64, s: f64, m: usize, symmetric: bool) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::invalid(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if !(s > 0.0 && s < kappa) {
            return Err(Error::invalid(format!(
                "velocity shift s = {s} must lie strictly inside (0, kappa = {kappa})"
            )));
        }
        if m == 0 {
            return Err(Error::invalid("truncation M must be at least 1"));
        }
        let m = m as i64;
        let half = (2.0 * s - kappa).abs() <= 4.0 * f64::EPSILON * kappa;
        let (i_min, i_max) = if symmetric && half {
            (-m, m - 1)
        } else {
            (-m, m)
        };
        let velocities = (i_min..=i_max).map(|i| i as f64 * kappa + s).collect();
        Ok(VelocityGrid {
            s,
            kappa,
            i_min,
            i_max,
            velocities,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn i_min(&self) -> i64 {
        self.i_min
    }

    pub fn i_max(&self) -> i64 {
        self.i_max
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    /// Velocities ordered by lattice index, so `velocities()[p]` is `v_{i_min + p}`.
    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    /// Storage position of lattice index `i`.
    pub fn position(&self, i: i64) -> Option<usize> {
        (self.i_min..=self.i_max)
            .contains(&i)
            .then(|| (i - self.i_min) as usize)
    }

    /// Lattice index stored at position `p`.
    pub fn index(&self, p: usize) -> i64 {
        self.i_min + p as i64
    }

    /// `min(s, kappa - s)`, the smallest speed on the untruncated lattice.
    pub fn min_speed(&self) -> f64 {
        self.s.min(self.kappa - self.s)
    }

    /// Number of positive velocities; they occupy the upper positions.
    pub fn positive_count(&self) -> usize {
        self.velocities.iter().filter(|v| **v > 0.0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.len() - self.positive_count()
    }
}

/// Uniform mesh of `Nx` cells on `[-l/2, l/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialMesh {
    period_l: f64,
    nx: usize,
    dx: f64,
    nodes: Vec<f64>,
}

impl SpatialMesh {
    pub fn new(period_l: f64, nx: usize) -> Result<Self> {
        if !(period_l.is_finite() && period_l > 0.0) {
            return Err(Error::invalid(format!(
                "period_l must be positive, got {period_l}"
            )));
        }
        if nx < 2 || !nx.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "Nx must be an even integer >= 2, got {nx}"
            )));
        }
        // x_j = -l/2 + j dx, written as (2j - Nx) l / (2 Nx) so that the
        // mirror node Nx - j carries the exact negation.
        let denom = 2.0 * nx as f64;
        let mut nodes: Vec<f64> = (0..=nx)
            .map(|j| (2 * j as i64 - nx as i64) as f64 * period_l / denom)
            .collect();
        nodes[0] = -0.5 * period_l;
        nodes[nx] = 0.5 * period_l;
        Ok(SpatialMesh {
            period_l,
            nx,
            dx: period_l / nx as f64,
            nodes,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn period_l(&self) -> f64 {
        self.period_l
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }
}

/// Inflow data: `f_b(v_p)` is prescribed at `x = -l/2` when `v_p > 0` and at
/// `x = l/2` when `v_p < 0`. Stored as one value per velocity position.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    values: Vec<f64>,
    positive: Vec<bool>,
}

impl BoundaryData {
    fn from_values(grid: &VelocityGrid, values: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(values.len(), grid.len());
        if let Some((p, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::invalid(format!(
                "inflow value at lattice index {} must be finite and nonnegative, got {v}",
                grid.index(p)
            )));
        }
        Ok(BoundaryData {
            values,
            positive: grid.velocities().iter().map(|v| *v > 0.0).collect(),
        })
    }

    /// Unit injection at lattice index `i0` from the left contact.
    pub fn mono_energetic(grid: &VelocityGrid, i0: i64) -> Result<Self> {
        let p = grid.position(i0).ok_or_else(|| {
            Error::invalid(format!(
                "injection index {i0} outside lattice range [{}, {}]",
                grid.i_min(),
                grid.i_max()
            ))
        })?;
        if grid.velocities()[p] <= 0.0 {
            return Err(Error::invalid(format!(
                "injection index {i0} has non-positive velocity {}; the left contact only injects v > 0",
                grid.velocities()[p]
            )));
        }
        let mut values = vec![0.0; grid.len()];
        values[p] = 1.0;
        Self::from_values(grid, values)
    }

    /// Arbitrary inflow profile keyed by lattice index; missing entries are zero.
    pub fn tabulated(grid: &VelocityGrid, table: &BTreeMap<i64, f64>) -> Result<Self> {
        let mut values = vec![0.0; grid.len()];
        for (&i, &v) in table {
            let p = grid.position(i).ok_or_else(|| {
                Error::invalid(format!(
                    "boundary table key {i} outside lattice range [{}, {}]",
                    grid.i_min(),
                    grid.i_max()
                ))
            })?;
            values[p] = v;
        }
        Self::from_values(grid, values)
    }

    /// `f_b` at every velocity position.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(position, value)` pairs pinned at the left contact (`v > 0`).
    pub fn left_inflow(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.positive)
            .enumerate()
            .filter(|(_, (_, pos))| **pos)
            .map(|(p, (v, _))| (p, *v))
    }

    /// `(position, value)` pairs pinned at the right contact (`v < 0`).
    pub fn right_inflow(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .zip(&self.positive)
            .enumerate()
            .filter(|(_, (_, pos))| !**pos)
            .map(|(p, (v, _))| (p, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

/// Potential, lattice, mesh and inflow data of one boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSystem {
    pub potential: FourierPotential,
    pub grid: VelocityGrid,
    pub mesh: SpatialMesh,
    pub boundary: BoundaryData,
}

impl WignerSystem {
    pub fn new(
        potential: FourierPotential,
        grid: VelocityGrid,
        mesh: SpatialMesh,
        boundary: BoundaryData,
    ) -> Result<Self> {
        if grid.kappa() != potential.kappa() {
            return Err(Error::invalid(format!(
                "velocity grid kappa {} differs from pi / l = {}",
                grid.kappa(),
                potential.kappa()
            )));
        }
        if mesh.period_l() != potential.period_l() {
            return Err(Error::invalid(format!(
                "mesh length {} differs from the potential period {}",
                mesh.period_l(),
                potential.period_l()
            )));
        }
        if boundary.values().len() != grid.len() {
            return Err(Error::invalid(
                "boundary data does not match the velocity grid",
            ));
        }
        Ok(WignerSystem {
            potential,
            grid,
            mesh,
            boundary,
        })
    }

    /// Same problem on a mesh with `nx` cells.
    pub fn with_mesh(&self, nx: usize) -> Result<Self> {
        let mesh = SpatialMesh::new(self.potential.period_l(), nx)?;
        Ok(WignerSystem {
            mesh,
            ..self.clone()
        })
    }

    /// One-line description used in reports.
    pub fn describe(&self) -> String {
        format!(
            "l={} coeffs={:?} s/kappa={} i=[{},{}] Nx={}",
            self.potential.period_l(),
            self.potential.coeffs(),
            self.grid.s() / self.grid.kappa(),
            self.grid.i_min(),
            self.grid.i_max(),
            self.mesh.nx()
        )
    }
}

/// Weight of the l^2 norm on velocity-indexed vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// Plain l^2.
    Unit,
    /// `sum |v_i| |f_i|^2`.
    Velocity,
}

/// Weighted l^2 norm of a velocity-indexed vector.
pub fn weighted_norm(grid: &VelocityGrid, f: &[f64], weight: Weight) -> f64 {
    debug_assert_eq!(f.len(), grid.len());
    let sum: f64 = match weight {
        Weight::Unit => f.iter().map(|x| x * x).sum(),
        Weight::Velocity => f
            .iter()
            .zip(grid.velocities())
            .map(|(x, v)| v.abs() * x * x)
            .sum(),
    };
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn paper_grid() -> VelocityGrid {
        VelocityGrid::new(PI, PI / 2.0, 40, true).unwrap()
    }

    #[test]
    fn small_symmetric_grid() {
        let g = VelocityGrid::new(PI, PI / 2.0, 2, true).unwrap();
        let expected = [-1.5 * PI, -0.5 * PI, 0.5 * PI, 1.5 * PI];
        assert_eq!(g.len(), 4);
        for (v, e) in g.velocities().iter().zip(expected) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn paper_grid_shape() {
        let g = paper_grid();
        assert_eq!(g.len(), 80);
        assert_eq!((g.i_min(), g.i_max()), (-40, 39));
        let min = g
            .velocities()
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        assert!((min - PI / 2.0).abs() < 1e-12);
        assert_eq!(g.min_speed(), PI / 2.0);
        assert_eq!(g.positive_count(), 40);
        assert!(g.velocities().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn non_symmetric_range() {
        let g = VelocityGrid::new(PI, 0.3, 3, true).unwrap();
        assert_eq!((g.i_min(), g.i_max()), (-3, 3));
        let g = VelocityGrid::new(PI, PI / 2.0, 3, false).unwrap();
        assert_eq!((g.i_min(), g.i_max()), (-3, 3));
    }

    #[test]
    fn rejects_degenerate_shift() {
        assert!(VelocityGrid::new(PI, 0.0, 40, true).is_err());
        assert!(VelocityGrid::new(PI, PI, 40, true).is_err());
        assert!(VelocityGrid::new(PI, -0.1, 40, true).is_err());
        assert!(VelocityGrid::new(PI, 0.5, 0, true).is_err());
    }

    #[test]
    fn mesh_nodes() {
        let m = SpatialMesh::new(1.0, 100).unwrap();
        assert_eq!(m.dx(), 0.01);
        assert_eq!(m.node(0), -0.5);
        assert_eq!(m.node(100), 0.5);
        assert_eq!(m.node(50), 0.0);
        let m = SpatialMesh::new(1.0, 2).unwrap();
        assert_eq!(m.nodes(), &[-0.5, 0.0, 0.5]);
        assert!(SpatialMesh::new(1.0, 3).is_err());
        assert!(SpatialMesh::new(1.0, 0).is_err());
    }

    #[test]
    fn mesh_mirror_is_bit_exact() {
        for nx in [2, 10, 100, 400, 1600, 25600] {
            for l in [1.0, 0.7, 3.3] {
                let m = SpatialMesh::new(l, nx).unwrap();
                for j in 0..=nx {
                    assert_eq!(m.node(nx - j), -m.node(j), "l={l} nx={nx} j={j}");
                }
            }
        }
    }

    #[test]
    fn mono_energetic_data() {
        let g = paper_grid();
        let b = BoundaryData::mono_energetic(&g, 0).unwrap();
        let p0 = g.position(0).unwrap();
        assert!((g.velocities()[p0] - PI / 2.0).abs() < 1e-15);
        assert_eq!(
            b.left_inflow()
                .filter(|(_, v)| *v != 0.0)
                .collect::<Vec<_>>(),
            vec![(p0, 1.0)]
        );
        assert!(b.right_inflow().all(|(_, v)| v == 0.0));
        let b1 = BoundaryData::mono_energetic(&g, 1).unwrap();
        assert_eq!(b1.values()[g.position(1).unwrap()], 1.0);
        assert!(BoundaryData::mono_energetic(&g, -1).is_err());
        assert!(BoundaryData::mono_energetic(&g, 40).is_err());
    }

    #[test]
    fn tabulated_data() {
        let g = paper_grid();
        let empty = BoundaryData::tabulated(&g, &BTreeMap::new()).unwrap();
        assert!(empty.is_zero());
        let single = BoundaryData::tabulated(&g, &BTreeMap::from([(0, 1.0)])).unwrap();
        assert_eq!(single, BoundaryData::mono_energetic(&g, 0).unwrap());
        let both = BoundaryData::tabulated(&g, &BTreeMap::from([(0, 0.5), (-1, 0.5)])).unwrap();
        assert_eq!(both.left_inflow().map(|(_, v)| v).sum::<f64>(), 0.5);
        assert_eq!(both.right_inflow().map(|(_, v)| v).sum::<f64>(), 0.5);
        assert!(BoundaryData::tabulated(&g, &BTreeMap::from([(99, 1.0)])).is_err());
        assert!(BoundaryData::tabulated(&g, &BTreeMap::from([(0, -1.0)])).is_err());
    }

    #[test]
    fn boundary_partition_is_exact() {
        let g = VelocityGrid::new(PI, 0.4, 5, false).unwrap();
        let b = BoundaryData::tabulated(&g, &BTreeMap::from([(2, 0.1)])).unwrap();
        let mut seen: Vec<usize> = b
            .left_inflow()
            .chain(b.right_inflow())
            .map(|(p, _)| p)
            .collect();
        seen.sort();
        assert_eq!(seen, (0..g.len()).collect::<Vec<_>>());
    }

    #[test]
    fn norms() {
        let g = paper_grid();
        let mut e0 = vec![0.0; g.len()];
        e0[g.position(0).unwrap()] = 1.0;
        assert_eq!(weighted_norm(&g, &e0, Weight::Unit), 1.0);
        assert!((weighted_norm(&g, &e0, Weight::Velocity) - (PI / 2.0).sqrt()).abs() < 1e-15);
        let z = vec![0.0; g.len()];
        assert_eq!(weighted_norm(&g, &z, Weight::Unit), 0.0);
        assert_eq!(weighted_norm(&g, &z, Weight::Velocity), 0.0);
    }

    #[test]
    fn system_consistency_checks() {
        let p = FourierPotential::new(1.0, vec![20.0, 20.0]).unwrap();
        let g = paper_grid();
        let b = BoundaryData::mono_energetic(&g, 0).unwrap();
        let mesh = SpatialMesh::new(2.0, 10).unwrap();
        assert!(WignerSystem::new(p.clone(), g.clone(), mesh, b.clone()).is_err());
        let wrong = VelocityGrid::new(PI / 2.0, PI / 4.0, 40, true).unwrap();
        let mesh = SpatialMesh::new(1.0, 10).unwrap();
        assert!(WignerSystem::new(p.clone(), wrong, mesh.clone(), b.clone()).is_err());
        let sys = WignerSystem::new(p, g, mesh, b).unwrap();
        assert_eq!(sys.with_mesh(40).unwrap().mesh.nx(), 40);
        assert!(sys.with_mesh(41).is_err());
    }
}
