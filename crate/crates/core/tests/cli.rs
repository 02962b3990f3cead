use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn qlm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlm")).args(args).env("QLM_THREADS", "2").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Data rows of a CSV with leading comment lines.
fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    rdr.records().map(|r| r.unwrap()).collect()
}

#[test]
fn mass_of_a_schwarzschild_sphere() {
    let out = qlm(&["mass", "--spacetime", "schwarzschild", "--M", "1", "--surface", "sphere", "--r", "10", "--L", "32", "--format", "json"]);
    let v = stdout_json(&out);
    let oracle = 10.0 * (1.0 - 0.8f64.sqrt());
    assert!((v["E"].as_f64().unwrap() - oracle).abs() <= 1e-9);
    assert_eq!(v["provenance"]["L"], 32);
    assert_eq!(v["provenance"]["tolerances"]["theorem1"], 1e-6);
    assert_eq!(v["convergence"].as_array().unwrap().len(), 4);
    // at most 12 significant digits
    let e = v["E"].to_string();
    assert!(e.trim_start_matches("0.").trim_start_matches('0').replace('.', "").len() <= 12, "{e}");
}

#[test]
fn output_is_deterministic() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = qlm(&["mass", "--spacetime", "schwarzschild", "--surface", "oblate", "--r", "8", "--L", "12", "--out", p.to_str().unwrap()]);
        assert!(out.status.success() && out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn flat_baseline_verifies() {
    let dir = tempdir().unwrap();
    let dump = dir.path().join("density.csv");
    let out = qlm(&[
        "verify", "--suite", "all", "--spacetime", "minkowski-spherical", "--surface", "sphere", "--r", "1", "--L", "16",
        "--dump", dump.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    let suites: std::collections::BTreeSet<_> = v["checks"].as_array().unwrap().iter().map(|c| c["suite"].as_str().unwrap().to_string()).collect();
    assert_eq!(suites.len(), 7);
    // flux −|H|_flat|φ|² cancels |H||φ|² node by node on a flat round sphere
    let rows = csv_rows(&std::fs::read_to_string(&dump).unwrap());
    assert_eq!(rows.len(), 18 * 34);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap().abs() <= 1e-9));
}

#[test]
fn violations_and_errors_exit_nonzero() {
    let out = qlm(&["mass", "--surface", "sphere", "--r", "2", "--spacetime", "schwarzschild", "--M", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-convex: |H| below threshold"));

    let out = qlm(&["verify", "--suite", "theorem1", "--L", "8", "--tol", "theorem1=1e-300", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violation: theorem1"));
    let rows = csv_rows(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(&rows[0][4], "false");

    let out = qlm(&["mass", "--spacetime", "kerr"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[spacetime-catalog] unknown spacetime: kerr"));

    let out = qlm(&["verify", "--surface", "tilted-sphere", "-p", "surface.axis=0", "--suite", "theorem1", "--L", "8"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[weyl-embedding] not-axisymmetric"));
    let out = qlm(&["mass", "--L", "4"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[cli] config error"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "task = \"mass\"\n[spacetime]\nname = \"schwarzschild\"\nparams = { M = 2.0 }\n[surface]\nname = \"sphere\"\nparams = { r = 40.0 }\nL = 12\n[output]\nformat = \"csv\"\n",
    )
    .unwrap();
    let out = qlm(&["mass", "--config", cfg.to_str().unwrap(), "--r", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = csv_rows(&text);
    let e: f64 = rows[0][5].parse().unwrap();
    assert!((e - 20.0 * (1.0 - 0.8f64.sqrt())).abs() <= 1e-9);
    assert_eq!(&rows[0][2], "12");
    assert!(text.starts_with("# qlm {"));

    let out = qlm(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn embed_round_trip() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("embed.csv");
    let out = qlm(&["embed", "--surface", "oblate", "--r", "1", "--L", "24", "--format", "csv", "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&first).unwrap();
    assert!(text.lines().any(|l| l == "theta,f,g,rho,z,H_flat"));
    let again = qlm(&["embed", "--metric", first.to_str().unwrap(), "--format", "csv"]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    let (a, b) = (csv_rows(&text), csv_rows(&String::from_utf8_lossy(&again.stdout)));
    assert_eq!(a.len(), 26);
    for (x, y) in a.iter().zip(&b) {
        // inputs carry 12 digits; H_flat takes two derivatives of them
        for (c, tol) in [(3, 1e-9), (4, 1e-9), (5, 1e-6)] {
            let (p, q): (f64, f64) = (x[c].parse().unwrap(), y[c].parse().unwrap());
            assert!((p - q).abs() <= tol);
        }
    }
    // the round unit sphere: ρ = sinθ, H_flat = 2
    let v = stdout_json(&qlm(&["embed", "--L", "8"]));
    let theta = v["theta"].as_array().unwrap();
    for (t, (rho, h)) in theta.iter().zip(v["rho"].as_array().unwrap().iter().zip(v["H_flat"].as_array().unwrap())) {
        assert!((rho.as_f64().unwrap() - t.as_f64().unwrap().sin()).abs() <= 1e-10);
        assert!((h.as_f64().unwrap() - 2.0).abs() <= 1e-10);
    }
}

#[test]
fn sweeps() {
    let v = stdout_json(&qlm(&["sweep", "--spacetime", "schwarzschild", "--L", "16"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let rr = r["r"].as_f64().unwrap();
        assert!((r["E"].as_f64().unwrap() - rr * (1.0 - (1.0 - 2.0 / rr).sqrt())).abs() <= 1e-9);
    }
    assert!((v["fitted_mass_quadratic"].as_f64().unwrap() - 1.0).abs() <= 1e-4);

    let out = qlm(&["sweep", "--spacetime", "schwarzschild", "--mode", "horizon", "--radii", "2.01,2.001,2.0001", "--L", "16", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# r -> r_h: E = 1.9999"));
    assert_eq!(csv_rows(&text).len(), 3);

    let out = qlm(&["sweep", "--spacetime", "minkowski-spherical", "--mode", "horizon"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn np_scalars_table() {
    let v = stdout_json(&qlm(&["np-scalars", "--spacetime", "schwarzschild", "--r", "10", "--L", "8"]));
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 10 * 18);
    let kp = 0.2 * 0.8f64.sqrt() / 2f64.sqrt();
    for n in nodes {
        assert!((n["kappa_perp"].as_f64().unwrap() - kp).abs() <= 1e-10);
        assert!((n["rho_re"].as_f64().unwrap() - kp / 2.0).abs() <= 1e-10);
    }
}

#[test]
fn help_documents_csv_columns() {
    for task in ["mass", "embed", "verify", "sweep", "np-scalars"] {
        let out = qlm(&[task, "--help"]);
        assert!(out.status.success());
        assert!(String::from_utf8_lossy(&out.stdout).contains("CSV columns"), "{task}");
    }
}
