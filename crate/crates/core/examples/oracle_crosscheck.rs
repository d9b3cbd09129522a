//! Shooting with the Picard propagator as an independent check on the
//! central difference scheme.
//!
//! ```text
//! cargo run --release --example oracle_crosscheck
//! ```

use std::path::Path;
use std::time::Instant;

use stationary_wigner::analysis::{scheme_difference, symmetry_error, total_mass};
use stationary_wigner::config::RunConfig;
use stationary_wigner::propagator::{solve_bvp_shooting, PropagatorOptions};
use stationary_wigner::{solve_bvp, Scheme, DEFAULT_REL_TOL};

fn main() -> stationary_wigner::Result<()> {
    let base = RunConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg"))?
        .system()?;
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "Nx", "rel L1 diff", "rate", "sym oracle", "sym central", "t[s]"
    );
    let mut prev: Option<f64> = None;
    for nx in [100, 200, 400, 800, 1600, 3200] {
        let sys = base.with_mesh(nx)?;
        let t = Instant::now();
        let oracle = solve_bvp_shooting(&sys, &PropagatorOptions::default())?;
        let secs = t.elapsed().as_secs_f64();
        let central = solve_bvp(&sys, Scheme::Central, DEFAULT_REL_TOL)?;
        let rel = scheme_difference(&oracle, &central)? / total_mass(&oracle);
        let rate = prev.map(|p| format!("{:.2}", p / rel)).unwrap_or_default();
        println!(
            "{nx:>6} {rel:>12.3e} {rate:>12} {:>12.2e} {:>12.2e} {secs:>8.2}",
            symmetry_error(&oracle),
            symmetry_error(&central)
        );
        prev = Some(rel);
    }
    Ok(())
}
