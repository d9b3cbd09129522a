//! Symmetry error of the three difference schemes under mesh refinement on
//! the barrier problem in `paper.cfg`.
//!
//! ```text
//! cargo run --release --example refinement_study [-- 100,400,1600,6400,25600]
//! ```

use std::path::Path;

use stationary_wigner::analysis::convergence_study;
use stationary_wigner::cli::parse_list;
use stationary_wigner::config::RunConfig;
use stationary_wigner::csv::write_study;
use stationary_wigner::{Method, Scheme};

fn main() -> stationary_wigner::Result<()> {
    let cfg = RunConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg"))?;
    let system = cfg.system()?;
    let nx: Vec<usize> = match std::env::args().nth(1) {
        Some(list) => parse_list("nx", &list)?,
        None => vec![100, 400, 1600, 6400],
    };

    let mut report = None;
    for scheme in Scheme::ALL {
        // Upwind2 hits round-off beyond a few thousand cells.
        let list: Vec<usize> = match scheme {
            Scheme::Upwind2 => nx.iter().copied().filter(|n| *n <= 1600).collect(),
            _ => nx.clone(),
        };
        let part = convergence_study(&system, Method::Fd(scheme), &list, cfg.rel_tol()?)?;
        match &mut report {
            None => report = Some(part),
            Some(r) => r.extend(part),
        }
    }
    let report = report.unwrap();

    println!("{}", report.system_descriptor);
    println!(
        "{:<8} {:>6} {:>14} {:>9} {:>8}",
        "scheme", "Nx", "symmetry", "order", "time[s]"
    );
    for scheme in Scheme::ALL {
        let rows: Vec<_> = report.rows_for(Method::Fd(scheme)).collect();
        for (k, r) in rows.iter().enumerate() {
            // Observed order from consecutive rows.
            let order = if k > 0 {
                let prev = rows[k - 1];
                format!(
                    "{:.2}",
                    (prev.symmetry_error / r.symmetry_error).ln()
                        / (r.nx as f64 / prev.nx as f64).ln()
                )
            } else {
                String::new()
            };
            println!(
                "{:<8} {:>6} {:>14.4e} {:>9} {:>8.2}",
                scheme, r.nx, r.symmetry_error, order, r.runtime_seconds
            );
        }
    }

    let out = std::env::temp_dir().join("wigner-refinement.csv");
    write_study(&report, &out)?;
    println!("report written to {}", out.display());
    Ok(())
}
