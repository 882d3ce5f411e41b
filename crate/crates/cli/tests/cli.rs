use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn btprop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btprop"))
        .current_dir(dir)
        .env_remove("BT_DEFAULT_TOL")
        .args(args)
        .output()
        .expect("spawn btprop")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cyclic(dir: &TempDir) {
    let out = btprop(
        dir.path(),
        &["gen", "cyclic", "--n", "3", "--p", "0.9", "-o", "c.txt"],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bt_file_is_accepted_for_any_seed() {
    let dir = TempDir::new().unwrap();
    let out = btprop(
        dir.path(),
        &["gen", "bt", "--scores", "1,2,4,0.5,3", "-o", "b.txt"],
    );
    assert_eq!(out.status.code(), Some(0));
    for seed in ["0", "1", "99", "123456789"] {
        let out = btprop(
            dir.path(),
            &["test", "b.txt", "--eps", "0.05", "--seed", seed],
        );
        assert_eq!(out.status.code(), Some(0), "seed {seed}");
        assert_eq!(report(&out)["result"]["verdict"]["outcome"], "accept");
    }
}

#[test]
fn cyclic_file_is_rejected_with_witness() {
    let dir = TempDir::new().unwrap();
    cyclic(&dir);
    let out = btprop(dir.path(), &["test", "c.txt", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let w = &r["result"]["verdict"]["witness"];
    assert_eq!(
        (w["x"].as_u64(), w["y"].as_u64(), w["z"].as_u64()),
        (Some(0), Some(1), Some(2))
    );
    assert_eq!(r["seed"], 0);
}

#[test]
fn cyclic_file_is_accepted_when_eps_balance_is_loose() {
    let dir = TempDir::new().unwrap();
    cyclic(&dir);
    // ratio 729 is (1+E)-balanced for E >= 728
    let out = btprop(
        dir.path(),
        &["test", "c.txt", "--eps", "0.5", "--eps-balance", "800"],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn disc_on_cyclic_file() {
    let dir = TempDir::new().unwrap();
    cyclic(&dir);
    let out = btprop(dir.path(), &["disc", "c.txt", "--per-root"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let total = r["result"]["total"].as_f64().unwrap();
    assert!((total - (0.9 - 0.01 / 0.82)).abs() < 1e-9);
    assert_eq!(r["result"]["per_root"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let gen = ["gen", "random", "--n", "12", "--seed", "4", "-o", "r.txt"];
    let a = btprop(dir.path(), &gen);
    let first = std::fs::read(dir.path().join("r.txt")).unwrap();
    let b = btprop(dir.path(), &gen);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(first, std::fs::read(dir.path().join("r.txt")).unwrap());

    let args = ["test", "r.txt", "--eps", "0.1", "--seed", "42"];
    let a = btprop(dir.path(), &args);
    let b = btprop(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn repair_writes_a_reversible_file() {
    let dir = TempDir::new().unwrap();
    btprop(
        dir.path(),
        &["gen", "random", "--n", "7", "--seed", "1", "-o", "r.txt"],
    );
    let out = btprop(dir.path(), &["repair", "r.txt", "-o", "fixed.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["result"]["total_change"].as_f64().unwrap() > 0.0);
    for seed in 0..20 {
        let out = btprop(
            dir.path(),
            &[
                "test",
                "fixed.txt",
                "--eps",
                "0.01",
                "--seed",
                &seed.to_string(),
            ],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let fit = report(&btprop(dir.path(), &["fit", "fixed.txt"]));
    assert!(fit["result"]["eps"].as_f64().unwrap() < 1e-5);
}

#[test]
fn fit_and_distance_report() {
    let dir = TempDir::new().unwrap();
    btprop(
        dir.path(),
        &["gen", "bt", "--scores", "1,2,4", "-o", "b.txt"],
    );
    let r = report(&btprop(dir.path(), &["fit", "b.txt", "--lsq"]));
    let s: Vec<f64> = r["result"]["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    for (got, want) in s.iter().zip([1.0, 2.0, 4.0]) {
        assert!((got - want).abs() < 1e-9);
    }
    assert_eq!(r["result"]["eps"], 0.0);

    cyclic(&dir);
    let r = report(&btprop(
        dir.path(),
        &["distance", "c.txt", "--budget", "20"],
    ));
    let upper = r["result"]["upper"].as_f64().unwrap();
    let lower = r["result"]["lower"].as_f64().unwrap();
    assert!(lower > 0.0 && lower <= upper && upper <= 0.8878048780487806);
}

#[test]
fn extend_tree_output_is_reversible() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("t.txt"), "n=4\n0 1 0.8\n2 1 0.3\n1 3 0.6\n").unwrap();
    let out = btprop(dir.path(), &["extend-tree", "t.txt", "-o", "x.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("x.txt")).unwrap();
    assert!(text.contains("0 1 0.8\n"));
    assert_eq!(
        btprop(dir.path(), &["test", "x.txt", "--eps", "0.01"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn labels_flow_through() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("l.txt"),
        "n=3\nlabels=ann bob cy\nann bob 0.9\nbob cy 0.9\ncy ann 0.9\n",
    )
    .unwrap();
    let r = report(&btprop(dir.path(), &["test", "l.txt", "--eps", "0.5"]));
    assert_eq!(
        r["result"]["witness_labels"],
        serde_json::json!(["ann", "bob", "cy"])
    );
}

#[test]
fn validate_and_error_exit_codes() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "n=2\n0 1 1.5\n").unwrap();
    let out = btprop(dir.path(), &["validate", "bad.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["line"], 2);

    cyclic(&dir);
    assert_eq!(
        btprop(dir.path(), &["validate", "c.txt"]).status.code(),
        Some(0)
    );
    // malformed input to a non-validate command, missing file, usage error
    assert_eq!(
        btprop(dir.path(), &["disc", "bad.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        btprop(dir.path(), &["disc", "missing.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        btprop(dir.path(), &["test", "c.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        btprop(dir.path(), &["test", "c.txt", "--eps", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tol_env_var_is_honoured() {
    let dir = TempDir::new().unwrap();
    cyclic(&dir);
    let out = Command::new(env!("CARGO_BIN_EXE_btprop"))
        .current_dir(dir.path())
        .env("BT_DEFAULT_TOL", "1e-6")
        .args(["test", "c.txt", "--eps", "0.5"])
        .output()
        .unwrap();
    assert_eq!(report(&out)["config"]["tester"]["predicate"]["tol"], 1e-6);
}
