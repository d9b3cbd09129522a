//! Density from each scheme, and how close second-order upwind on a coarse
//! mesh comes to first-order upwind on a fine one.
//!
//! ```text
//! cargo run --release --example density_comparison [-- <fine Nx, default 25600>]
//! ```

use std::path::Path;

use stationary_wigner::analysis::{density, scheme_difference, total_mass};
use stationary_wigner::config::RunConfig;
use stationary_wigner::{solve_bvp, Scheme, DEFAULT_REL_TOL};

fn main() -> stationary_wigner::Result<()> {
    let cfg = RunConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg"))?;
    let coarse = cfg.system()?.with_mesh(100)?;
    let fine_nx: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("Nx"))
        .unwrap_or(25600);
    let fine = coarse.with_mesh(fine_nx)?;

    let up1_coarse = solve_bvp(&coarse, Scheme::Upwind1, DEFAULT_REL_TOL)?;
    let up2 = solve_bvp(&coarse, Scheme::Upwind2, DEFAULT_REL_TOL)?;
    let central = solve_bvp(&coarse, Scheme::Central, DEFAULT_REL_TOL)?;
    let up1_fine = solve_bvp(&fine, Scheme::Upwind1, DEFAULT_REL_TOL)?;

    let profiles = [
        ("upwind1/100", density(&up1_coarse)),
        ("upwind2/100", density(&up2)),
        ("central/100", density(&central)),
        ("upwind1/fine", density(&up1_fine)),
    ];
    print!("{:>6}", "x");
    for (name, _) in &profiles {
        print!(" {name:>13}");
    }
    println!();
    let ratio = fine_nx / 100;
    for j in (0..=100).step_by(5) {
        print!("{:>6.2}", coarse.mesh.node(j));
        for (name, n) in &profiles {
            let k = if name.ends_with("fine") { j * ratio } else { j };
            print!(" {:>13.5}", n[k]);
        }
        println!();
    }

    let mass = total_mass(&up1_fine);
    for (name, sol) in [
        ("upwind1/100", &up1_coarse),
        ("upwind2/100", &up2),
        ("central/100", &central),
    ] {
        let d = scheme_difference(sol, &up1_fine)?;
        println!(
            "L1 distance {name} vs upwind1/{fine_nx}: {d:.4e} ({:.3e} of total mass)",
            d / mass
        );
    }
    Ok(())
}
