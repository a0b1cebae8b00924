//! The `hyperfinsler` binary: exit codes, output modes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfinsler"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_config(name: &str, extra: &[&str]) -> Output {
    let path = config(name);
    let mut args = vec!["--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn flat_config_passes() {
    let o = with_config("flat.toml", &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS quaternion"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn every_sample_config_passes_with_random_tensors() {
    for name in [
        "flat.toml",
        "exponential.toml",
        "finsler.toml",
        "indefinite.toml",
    ] {
        let o = with_config(name, &["--points", "4", "--random-tensors", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn non_homogeneous_config_fails_homogeneity_only() {
    let o = with_config("nonhomogeneous.toml", &["--machine"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .filter(|v: &serde_json::Value| v["pass"] == false && v.get("check").is_some())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|v| v["check"] == "homogeneity"));
}

#[test]
fn tolerance_override_applies_per_family() {
    let o = with_config("nonhomogeneous.toml", &["--tol", "homogeneity=1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = with_config("finsler.toml", &["--tol", "nonsense=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonsense"));
}

#[test]
fn perturbation_is_caught() {
    let o = with_config("finsler.toml", &["--perturb", "0.1", "--random-tensors"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    for check in [
        "FAIL metricity.a1",
        "FAIL torsion_horizontal.a3",
        "FAIL parallel.D.J2",
    ] {
        assert!(text.contains(check), "missing {check}");
    }
}

#[test]
fn machine_output_is_deterministic() {
    let args = [
        "--points",
        "5",
        "--seed",
        "42",
        "--random-tensors",
        "--machine",
        "--dump-coeffs",
    ];
    let a = with_config("indefinite.toml", &args);
    let b = with_config("indefinite.toml", &args);
    assert_eq!(a.stdout, b.stdout);
    let c = with_config(
        "indefinite.toml",
        &[
            "--points",
            "5",
            "--seed",
            "43",
            "--random-tensors",
            "--machine",
        ],
    );
    assert_ne!(a.stdout, c.stdout);
    let last: serde_json::Value = serde_json::from_str(stdout(&a).lines().last().unwrap()).unwrap();
    assert_eq!(last["pass"], true);
    let dumps = stdout(&a)
        .lines()
        .filter(|l| l.contains("\"dump\""))
        .count();
    // 5 points, 2 indicants, 2 routes.
    assert_eq!(dumps, 20);
}

#[test]
fn record_fields_are_exact() {
    let o = with_config("flat.toml", &["--machine"]);
    let first: serde_json::Value =
        serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    for key in ["check", "point", "residual", "tol", "pass"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn configuration_errors_exit_two() {
    let o = run(&["--config", "/definitely/not/here.toml"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("hyperfinsler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("bad_expr.toml", "n = 1\nfstar = \"y1^2 + z3\"\n", "fstar"),
        (
            "bad_skew.toml",
            "n = 1\nfstar = \"y1^2 + y2^2\"\nS.1.2.1 = \"1\"\n",
            "S.1.2.1",
        ),
        ("bad_index.toml", "n = 1\nfstar = \"y1^2 + y3^2\"\n", "y3"),
    ];
    for (file, body, needle) in cases {
        let path = dir.join(file);
        std::fs::write(&path, body).unwrap();
        let o = run(&["--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{file}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{file}: {err}");
    }
    std::fs::remove_dir_all(&dir).ok();
}
