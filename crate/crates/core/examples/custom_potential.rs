//! A three-harmonic potential on a longer device with tabulated inflow from
//! both contacts, configured from TOML and checked with the property suite.
//!
//! ```text
//! cargo run --release --example custom_potential
//! ```

use stationary_wigner::analysis::{current_deviation, density, solve_with, symmetry_error};
use stationary_wigner::config::RunConfig;
use stationary_wigner::verify::{run_all, VerifyOptions};

const CONFIG: &str = r#"
[potential]
period_l = 2.0
coeffs = [0.0, 4.0, -2.0, 1.0]

[grid]
s_over_kappa = 0.3
M = 24
symmetric = false

[mesh]
Nx = 200

[boundary]
mode = "table"
table = [{ i = 0, f = 1.0 }, { i = 1, f = 0.6 }, { i = 2, f = 0.2 }, { i = -1, f = 0.4 }]

[solver]
scheme = "upwind2"
rel_tol = 1e-12
"#;

fn main() -> stationary_wigner::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let sys = cfg.system()?;
    println!("{}", sys.describe());
    println!(
        "V(x) at -l/2, -l/4, 0: {:.3} {:.3} {:.3}",
        sys.potential.eval(-1.0),
        sys.potential.eval(-0.5),
        sys.potential.eval(0.0)
    );

    for method in ["upwind1", "upwind2", "central", "oracle"] {
        let sol = solve_with(&sys, method.parse()?, cfg.rel_tol()?)?;
        let n = density(&sol);
        println!(
            "{method:<8} symmetry {:.3e}  current deviation {:.3e}  n(0) = {:.5}",
            symmetry_error(&sol),
            current_deviation(&sol),
            n[sol.nx() / 2]
        );
    }

    let report = run_all(&sys, cfg.method()?, &VerifyOptions::default())?;
    for check in &report.checks {
        println!("{check}");
    }
    Ok(())
}
