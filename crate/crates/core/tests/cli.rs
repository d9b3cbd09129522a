use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stationary_wigner::csv::read_table;

fn paper_cfg() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.cfg")
}

fn wigner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn stdout_value(out: &Output, key: &str) -> f64 {
    text(&out.stdout)
        .lines()
        .find_map(|l| l.strip_prefix(key).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no `{key}` line in output"))
}

#[test]
fn solve_paper_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner(&[
        "solve",
        paper_cfg().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(stdout_value(&out, "symmetry_error") <= 1e-10);
    assert!(stdout_value(&out, "residual") <= 1e-12);
    for f in ["solution.csv", "density.csv", "current.csv", "report.csv"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let sol = read_table(dir.path().join("solution.csv")).unwrap();
    assert_eq!(sol.header, ["x", "v", "f"]);
    assert_eq!(sol.rows.len(), 80 * 101);
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(report.starts_with("scheme, Nx, symmetry_error, runtime_s, residual\ncentral, 100, "));
}

#[test]
fn solution_files_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = wigner(&[
            "solve",
            paper_cfg().to_str().unwrap(),
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for f in ["solution.csv", "density.csv", "current.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn zero_potential_density_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("coeffs = [20.0, 20.0]", "coeffs = [0.0]")
        .replace("scheme = \"central\"", "scheme = \"upwind2\"");
    let cfg = write_cfg(dir.path(), "free.cfg", &cfg);
    let out = wigner(&[
        "solve",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let n = read_table(dir.path().join("density.csv"))
        .unwrap()
        .column("value")
        .unwrap();
    assert_eq!(n.len(), 101);
    assert!(n.iter().all(|v| *v == 1.0));
}

#[test]
fn degenerate_shift_is_rejected_by_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("s_over_kappa = 0.5", "s_over_kappa = 0.0");
    let cfg = write_cfg(dir.path(), "bad.cfg", &cfg);
    let out = wigner(&[
        "solve",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("s_over_kappa"));
    assert!(!dir.path().join("solution.csv").exists());
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("M = 40", "M = 40\nV0 = 20");
    let cfg = write_cfg(dir.path(), "typo.cfg", &cfg);
    let out = wigner(&["verify", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("V0"));
}

#[test]
fn odd_mesh_fails_verify_validation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("Nx = 100", "Nx = 101");
    let cfg = write_cfg(dir.path(), "odd.cfg", &cfg);
    let out = wigner(&["verify", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("mesh.Nx"));
    assert!(!text(&out.stdout).contains("PASS"));
}

#[test]
fn verify_zero_potential() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fs::read_to_string(paper_cfg())
        .unwrap()
        .replace("coeffs = [20.0, 20.0]", "coeffs = [5.0]")
        .replace("M = 40", "M = 8");
    let cfg = write_cfg(dir.path(), "free.cfg", &cfg);
    let out = wigner(&["verify", cfg.to_str().unwrap()]);
    let stdout = text(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert_eq!(stdout.matches("PASS").count(), 5);
    assert!(stdout.contains("propagator is the identity"));
    assert!(stdout.contains("max |P[0,x] - P[0,-x]| = 0.000e0"));
}

#[test]
fn study_central_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = wigner(&[
        "study",
        paper_cfg().to_str().unwrap(),
        "--nx",
        "100",
        "--schemes",
        "central",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let t = read_table(dir.path().join("report.csv")).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][0], "central");
    assert!(t.column("symmetry_error").unwrap()[0] <= 1e-10);
}

#[test]
fn study_records_failed_rows() {
    let dir = tempfile::tempdir().unwrap();
    // An unreachable tolerance fails each solve but not the command.
    let out = wigner(&[
        "study",
        paper_cfg().to_str().unwrap(),
        "--nx",
        "10,20",
        "--schemes",
        "upwind1,upwind2",
        "--tol",
        "1e-30",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let t = read_table(dir.path().join("report.csv")).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t
        .column("symmetry_error")
        .unwrap()
        .iter()
        .all(|v| v.is_nan()));
}

#[test]
fn study_rejects_empty_list() {
    let out = wigner(&[
        "study",
        paper_cfg().to_str().unwrap(),
        "--nx",
        "",
        "--schemes",
        "upwind1",
    ]);
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("usage"));
    let out = wigner(&[
        "study",
        paper_cfg().to_str().unwrap(),
        "--nx",
        "100",
        "--schemes",
        "upwind3",
    ]);
    assert!(!out.status.success());
}

#[test]
fn missing_config_reports_path() {
    let out = wigner(&["solve", "/nonexistent/run.cfg"]);
    assert!(!out.status.success());
    assert!(text(&out.stderr).contains("/nonexistent/run.cfg"));
}
