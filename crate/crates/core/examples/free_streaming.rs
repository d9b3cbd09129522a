//! Without a potential every method transports the inflow unchanged.
//!
//! ```text
//! cargo run --release --example free_streaming
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;

use stationary_wigner::analysis::{current, density, solve_with};
use stationary_wigner::*;

fn main() -> Result<()> {
    let grid = VelocityGrid::new(PI, PI / 2.0, 10, true)?;
    let inflow: BTreeMap<i64, f64> = [(0, 1.0), (2, 0.5), (-3, 0.25)].into();
    let boundary = BoundaryData::tabulated(&grid, &inflow)?;
    let sys = WignerSystem::new(
        FourierPotential::new(1.0, vec![3.0])?,
        grid,
        SpatialMesh::new(1.0, 50)?,
        boundary,
    )?;

    for method in [
        Method::Fd(Scheme::Upwind1),
        Method::Fd(Scheme::Upwind2),
        Method::Fd(Scheme::Central),
        Method::Oracle,
    ] {
        let sol = solve_with(&sys, method, DEFAULT_REL_TOL)?;
        let mut worst: f64 = 0.0;
        for j in 0..=sol.nx() {
            for (p, b) in sys.boundary.values().iter().enumerate() {
                worst = worst.max((sol.at(p, j) - b).abs());
            }
        }
        let n = density(&sol);
        let jx = current(&sol);
        println!(
            "{method:<8} max |f - f_b| = {worst:.1e}   n = {:.6}   J = {:.6}",
            n[sol.nx() / 2],
            jx[sol.nx() / 2]
        );
    }
    Ok(())
}
