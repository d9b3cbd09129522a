//! The transfer operator over `[0, x]` equals the one over `[0, -x]` for an
//! even potential, and composing forward and backward gives the identity.
//!
//! ```text
//! cargo run --release --example propagator_symmetry
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use stationary_wigner::config::RunConfig;
use stationary_wigner::propagator::{
    contraction_step, picard_gaps, picard_propagate, propagator_matrix, PropagatorOptions,
};

fn main() -> stationary_wigner::Result<()> {
    let sys = RunConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg"))?
        .system()?;
    let opts = PropagatorOptions::default();
    let nv = sys.grid.len();
    println!(
        "contraction step {:.5} (pieces of {:.5})",
        contraction_step(&sys),
        opts.step_fraction * contraction_step(&sys)
    );

    let mut e0 = vec![0.0; nv];
    e0[sys.grid.position(0).unwrap()] = 1.0;
    let gaps = picard_gaps(&sys, &e0, 0.0, 0.1, &opts)?;
    let shown: Vec<String> = gaps.iter().take(8).map(|g| format!("{g:.1e}")).collect();
    println!(
        "Picard gaps on the first piece: {} ({} iterations)",
        shown.join(" "),
        gaps.len()
    );

    for x in [0.05, 0.15, 0.25, 0.45] {
        let fwd = propagator_matrix(&sys, 0.0, x, &opts)?;
        let bwd = propagator_matrix(&sys, 0.0, -x, &opts)?;
        println!(
            "x = {x:.2}: max |P[0,x] - P[0,-x]| = {:.2e}, max |P| = {:.3}",
            fwd.max_abs_diff(&bwd),
            fwd.matrix().amax()
        );
    }

    let there = propagator_matrix(&sys, -0.3, 0.2, &opts)?;
    let back = propagator_matrix(&sys, 0.2, -0.3, &opts)?;
    let id = DMatrix::<f64>::identity(nv, nv);
    println!(
        "max |P[-0.3,0.2] P[0.2,-0.3] - I| = {:.2e}",
        (there.then(&back)?.matrix() - &id).amax()
    );

    // Over a whole period the two halves cancel.
    let full = propagator_matrix(&sys, -0.5, 0.5, &opts)?;
    println!(
        "max |P[-l/2,l/2] - I| = {:.2e}",
        (full.matrix() - &id).amax()
    );

    let f = picard_propagate(&sys, &e0, 0.0, 0.1, &opts)?;
    let g = picard_propagate(&sys, &f, 0.1, 0.0, &opts)?;
    let err = g
        .iter()
        .zip(&e0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("e_0 to x = 0.1 and back: max deviation {err:.2e}");
    Ok(())
}
