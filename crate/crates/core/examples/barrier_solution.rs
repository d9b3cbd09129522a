//! Central-scheme solution of the barrier problem: negative Wigner values,
//! transmission to the right contact and scattering into faster states.
//!
//! ```text
//! cargo run --release --example barrier_solution [-- <output dir>]
//! ```

use std::path::{Path, PathBuf};

use stationary_wigner::analysis::{current, density, symmetry_error};
use stationary_wigner::config::RunConfig;
use stationary_wigner::csv::{write_profile, write_solution};
use stationary_wigner::{solve_bvp, Scheme};

fn main() -> stationary_wigner::Result<()> {
    let cfg = RunConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg"))?;
    let sys = cfg.system()?;
    let sol = solve_bvp(&sys, Scheme::Central, cfg.rel_tol()?)?;
    let nx = sol.nx();
    let v = sys.grid.velocities();

    println!("{}", sys.describe());
    println!("symmetry error   {:.3e}", symmetry_error(&sol));
    println!("residual         {:.3e}", sol.residual());

    let (mut fmin, mut at) = (f64::INFINITY, (0, 0));
    for j in 0..=nx {
        for p in 0..sol.nv() {
            if sol.at(p, j) < fmin {
                fmin = sol.at(p, j);
                at = (p, j);
            }
        }
    }
    println!(
        "min f            {fmin:.4} at v = {:.3}, x = {:.2}",
        v[at.0],
        sys.mesh.node(at.1)
    );

    // Occupation per velocity at the device centre.
    println!("\nf(0, v) for |v| <= 6 kappa:");
    for (p, vp) in v.iter().enumerate() {
        if vp.abs() <= 6.0 * sys.grid.kappa() {
            println!("  v = {vp:>8.3}  f = {:>10.5}", sol.at(p, nx / 2));
        }
    }

    let n = density(&sol);
    let j = current(&sol);
    println!("\n{:>6} {:>10} {:>10}", "x", "density", "current");
    for k in (0..=nx).step_by(nx / 10) {
        println!("{:>6.2} {:>10.4} {:>10.6}", sys.mesh.node(k), n[k], j[k]);
    }

    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir).map_err(|e| stationary_wigner::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    write_solution(&sol, dir.join("solution.csv"))?;
    write_profile(sys.mesh.nodes(), &n, dir.join("density.csv"))?;
    println!("\nCSV files written to {}", dir.display());
    Ok(())
}
