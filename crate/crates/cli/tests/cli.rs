use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).output().unwrap()
}

fn config_file(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("run.conf");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn hydrogen_solve_lists_the_levels() {
    let cfg = configs().join("hydrogen.conf");
    let out = spectra(&["solve", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    // E₁₀ = −1/242 also lies in the range.
    assert_eq!(rows.len(), 11);
    for (n, row) in rows.iter().enumerate() {
        let e: f64 = row[1].parse().unwrap();
        let exact = -0.5 / ((n + 1) * (n + 1)) as f64;
        assert!((e - exact).abs() < 1e-9, "n={n}: {e}");
    }
}

#[test]
fn empty_well_gives_no_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_file(
        &dir,
        "[potential] family=square_well depth=0 left=-1 right=1\n[domain] kind=wholeline\n[solve] emin=-1 emax=-0.01",
    );
    let out = spectra(&["solve", &cfg, "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,energy,gamma_residual\n");
}

#[test]
fn scan_round_trip_rebrackets_the_levels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("truncated_oscillator.conf");
    let scan_path = dir.path().join("scan.csv");
    let out = spectra(&["scan", cfg.to_str().unwrap(), "--output", scan_path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = csv_rows(&std::fs::read_to_string(&scan_path).unwrap());
    assert_eq!(rows.len(), 200);
    let gamma: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let pi = std::f64::consts::PI;
    let brackets = gamma
        .windows(2)
        .map(|w| (0..8).filter(|&n| w[0] < n as f64 * pi && n as f64 * pi <= w[1]).count())
        .sum::<usize>();
    assert_eq!(brackets, 2);

    let solved = spectra(&[
        "solve",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--scan-out",
        dir.path().join("s.csv").to_str().unwrap(),
    ]);
    assert!(solved.status.success());
    assert_eq!(csv_rows(&String::from_utf8(solved.stdout).unwrap()).len(), brackets);
    let scan = csv_rows(&std::fs::read_to_string(dir.path().join("s.csv")).unwrap());
    assert!(scan.len() >= 64);
}

#[test]
fn count_prints_one_integer() {
    let cfg = configs().join("truncated_oscillator.conf");
    let out = spectra(&["count", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
}

#[test]
fn eigenfunction_csv_has_one_node() {
    let cfg = configs().join("truncated_oscillator.conf");
    let out = spectra(&["eigenfunction", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,psi\n"));
    let psi: Vec<f64> = csv_rows(&text).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(psi.len(), 401);
    let nodes = psi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(nodes, 1);
}

#[test]
fn verify_reports_agreement() {
    let cfg = configs().join("truncated_oscillator.conf");
    let out = spectra(&["verify", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[4] != "-"));
}

#[test]
fn threshold_zero_shifts_energies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_file(
        &dir,
        "[potential] family=truncated_oscillator omega=1 cutoff=2\n[domain] kind=wholeline\n\
         [solve] emin=-2 emax=-0.001 energy_zero=threshold",
    );
    let out = spectra(&["solve", &cfg, "--format", "csv"]);
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let e0: f64 = rows[0][1].parse().unwrap();
    assert!((e0 - (0.497017489 - 2.0)).abs() < 1e-8);
}

#[test]
fn flags_override_tolerances_and_interval() {
    let cfg = configs().join("truncated_oscillator.conf");
    let out = spectra(&["solve", cfg.to_str().unwrap(), "--e-tol", "1e-6", "--interval", "-3", "3", "--format", "csv"]);
    assert!(out.status.success());
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let e0: f64 = rows[0][1].parse().unwrap();
    assert!((e0 - 0.497017489).abs() < 1e-5);
    let bad = spectra(&["solve", cfg.to_str().unwrap(), "--e-tol=-1"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8(bad.stderr).unwrap().contains("e_tol"));
}

#[test]
fn diagnostics_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_file(&dir, "[potential] family=coulomb\n[domain] kind=halfline\n[solve] emin=-1 emax=-0.1");
    let out = spectra(&["solve", &cfg]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("`l`"), "{err}");
    assert!(out.stdout.is_empty());

    let out = spectra(&["solve", "/nonexistent/run.conf"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
