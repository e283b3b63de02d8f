use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn invpdelta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invpdelta"))
        .args(args)
        .env_remove("INVPDELTA_SEED")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SOLVE_TOML: &str = r#"
equation = "heat"
variant = "invariant_explicit"
steps = 8
seed = 11
boundary = "copy"

[mesh]
preset = "orthogonal"
h = 0.1
tau = 0.004
n_min = 0
n_max = 10

[initial]
name = "linear"
noise = 0.01
"#;

#[test]
fn list_names_every_equation() {
    let out = invpdelta(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for eq in ["heat", "burgers", "potential_burgers", "kdv", "wave_demo"] {
        assert!(text.contains(eq), "missing {eq}");
    }
    assert!(text.contains("fundamental"));
}

#[test]
fn exact_writes_hashed_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = invpdelta(&[
        "exact",
        "--equation",
        "heat",
        "--name",
        "fundamental",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let report = read_json(&out_dir.join("report.json"));
    assert_eq!(report["pass"], Value::Bool(true));

    let manifest = read_json(&out_dir.join("manifest.json"));
    assert_eq!(manifest["command"], "exact");
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 2);
    for f in files {
        let bytes = fs::read(out_dir.join(f["name"].as_str().unwrap())).unwrap();
        assert_eq!(f["bytes"].as_u64().unwrap(), bytes.len() as u64);
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }

    // The written lattice round-trips through `check`.
    let csv = out_dir.join("lattice.csv");
    let check = invpdelta(&[
        "check",
        "--equation",
        "heat",
        "--variant",
        "invariant_implicit",
        "--lattice",
        csv.to_str().unwrap(),
        "--tol",
        "1e-10",
    ]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn invariants_prints_eight_values_for_heat() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let out = invpdelta(&[
        "exact",
        "--equation",
        "heat",
        "--name",
        "linear",
        "--out",
        run.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let inv = invpdelta(&[
        "invariants",
        "--equation",
        "heat",
        "--lattice",
        run.join("lattice.csv").to_str().unwrap(),
    ]);
    assert!(inv.status.success(), "{}", String::from_utf8_lossy(&inv.stderr));
    let text = String::from_utf8(inv.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.starts_with("I1\t"));
}

#[test]
fn standard_scheme_fails_invariance_with_exit_one() {
    let out = invpdelta(&[
        "invariance",
        "--equation",
        "heat",
        "--variant",
        "standard_explicit",
        "--samples",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("V5") && err.contains("V6"), "{err}");
}

#[test]
fn invariant_scheme_passes_invariance() {
    let out = invpdelta(&[
        "invariance",
        "--equation",
        "burgers",
        "--variant",
        "invariant_explicit",
        "--samples",
        "20",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "equation = \"heat\"\nunknown_key = 3\n").unwrap();
    let out = invpdelta(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = invpdelta(&["exact", "--equation", "heat", "--name", "no_such_solution"]);
    assert_eq!(out.status.code(), Some(2));

    let out = invpdelta(&["list", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_group_element_exits_three() {
    let out = invpdelta(&[
        "orbit",
        "--equation",
        "heat",
        "--name",
        "fundamental",
        "--variant",
        "invariant_explicit",
        "--generator",
        "6",
        "--eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, SOLVE_TOML).unwrap();
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = invpdelta(&[
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(out_dir.join("lattice.csv")).unwrap()
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);

    // The environment seed overrides the configured one.
    let out_dir = dir.path().join("c");
    let out = Command::new(env!("CARGO_BIN_EXE_invpdelta"))
        .args([
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .env("INVPDELTA_SEED", "12")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_ne!(fs::read(out_dir.join("lattice.csv")).unwrap(), a);
    assert_eq!(read_json(&out_dir.join("manifest.json"))["seed"], 12);
}
