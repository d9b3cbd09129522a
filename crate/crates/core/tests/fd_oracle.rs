//! Dense reference implementation of the three difference schemes, written
//! directly from the difference equations with one unknown per grid value,
//! compared with the library's sparse assembly and block solver.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use stationary_wigner::*;

/// Difference stencil and coupling nodes as (node, weight) pairs.
type Stencil = (Vec<(usize, f64)>, Vec<(usize, f64)>);

fn reference(sys: &WignerSystem, scheme: Scheme) -> Vec<f64> {
    let v = sys.grid.velocities();
    let nv = v.len();
    let nx = sys.mesh.nx();
    let l = sys.potential.period_l();
    let dx = l / nx as f64;
    let kappa = PI / l;
    let a = sys.potential.coeffs();
    let b = sys.boundary.values();
    let n = nv * (nx + 1);
    let idx = |p: usize, j: usize| j * nv + p;

    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);

    // Adds c * g_{p,j} to row r.
    let add_g = |m: &mut DMatrix<f64>, r: usize, p: usize, j: usize, c: f64| {
        let x = -0.5 * l + j as f64 * dx;
        for (h, an) in a.iter().enumerate().skip(1) {
            let w = an * (2.0 * h as f64 * kappa * x).sin();
            if p >= h {
                m[(r, idx(p - h, j))] += c * w;
            }
            if p + h < nv {
                m[(r, idx(p + h, j))] -= c * w;
            }
        }
    };

    for p in 0..nv {
        let vp = v[p];
        for j in 0..=nx {
            let r = idx(p, j);
            let pinned = (vp > 0.0 && j == 0) || (vp < 0.0 && j == nx);
            if pinned {
                m[(r, r)] = 1.0;
                rhs[r] = b[p];
                continue;
            }
            // f' * dx at node j, as (node, coefficient) pairs, plus the
            // coupling nodes with their weights.
            let (stencil, g): Stencil = match (scheme, vp > 0.0) {
                (Scheme::Upwind1, false) => (vec![(j + 1, 1.0), (j, -1.0)], vec![(j, 1.0)]),
                (Scheme::Upwind1, true) => (vec![(j, 1.0), (j - 1, -1.0)], vec![(j, 1.0)]),
                (Scheme::Upwind2, false) if j + 2 <= nx => {
                    (vec![(j + 2, -0.5), (j + 1, 2.0), (j, -1.5)], vec![(j, 1.0)])
                }
                (Scheme::Upwind2, false) => (vec![(j + 1, 1.0), (j, -1.0)], vec![(j, 1.0)]),
                (Scheme::Upwind2, true) if j >= 2 => {
                    (vec![(j - 2, 0.5), (j - 1, -2.0), (j, 1.5)], vec![(j, 1.0)])
                }
                (Scheme::Upwind2, true) => (vec![(j, 1.0), (j - 1, -1.0)], vec![(j, 1.0)]),
                (Scheme::Central, false) => {
                    (vec![(j + 1, 1.0), (j, -1.0)], vec![(j, 0.5), (j + 1, 0.5)])
                }
                (Scheme::Central, true) => {
                    (vec![(j, 1.0), (j - 1, -1.0)], vec![(j, 0.5), (j - 1, 0.5)])
                }
            };
            for (jj, c) in stencil {
                m[(r, idx(p, jj))] += vp * c / dx;
            }
            for (jj, c) in g {
                add_g(&mut m, r, p, jj, -c);
            }
        }
    }
    m.lu()
        .solve(&rhs)
        .expect("reference system is nonsingular")
        .as_slice()
        .to_vec()
}

fn compare(sys: &WignerSystem) {
    for scheme in Scheme::ALL {
        let want = reference(sys, scheme);
        let got = solve_bvp(sys, scheme, 1e-13).unwrap();
        let scale = want.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let err = want
            .iter()
            .zip(got.values())
            .fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
        assert!(
            err <= 1e-10 * scale,
            "{scheme}: max deviation {err:e} (scale {scale:e})"
        );
    }
}

#[test]
fn matches_dense_reference_small() {
    let g = VelocityGrid::new(PI, PI / 2.0, 6, true).unwrap();
    let b = BoundaryData::tabulated(&g, &[(0, 1.0), (2, 0.25), (-1, 0.5)].into()).unwrap();
    let p = FourierPotential::new(1.0, vec![1.0, 3.0, -1.5]).unwrap();
    compare(&WignerSystem::new(p, g, SpatialMesh::new(1.0, 12).unwrap(), b).unwrap());
}

#[test]
fn matches_dense_reference_unsymmetric_lattice() {
    let l = 2.0;
    let kappa = PI / l;
    let g = VelocityGrid::new(kappa, 0.3 * kappa, 5, false).unwrap();
    let b = BoundaryData::mono_energetic(&g, 1).unwrap();
    let p = FourierPotential::new(l, vec![0.0, 2.0, 0.0, 1.0]).unwrap();
    compare(&WignerSystem::new(p, g, SpatialMesh::new(l, 10).unwrap(), b).unwrap());
}

#[test]
fn matches_dense_reference_barrier() {
    let g = VelocityGrid::new(PI, PI / 2.0, 40, true).unwrap();
    let b = BoundaryData::mono_energetic(&g, 0).unwrap();
    let p = FourierPotential::new(1.0, vec![20.0, 20.0]).unwrap();
    compare(&WignerSystem::new(p, g, SpatialMesh::new(1.0, 16).unwrap(), b).unwrap());
}
