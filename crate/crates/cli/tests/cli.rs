use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("manifests")
        .join(name)
}

fn tmodels(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmodels"))
        .args(args)
        .env_remove("TMODELS_PRECISION")
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, file: &str, extra: &[&str]) -> (String, i32) {
    let path = manifest(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = tmodels(&args);
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

fn temp_manifest(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tmodels-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn inspect_carlitz_and_dual() {
    let (out, code) = run_on("inspect", "carlitz.toml", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("rank: 1\n"));
    assert!(out.contains("certificate: (1 (prec 64), 1)\n"));
    assert!(out.contains("effective: yes\n"));

    let (out, code) = run_on("inspect", "dual-carlitz.toml", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("pole_order: 1\n"));
    assert!(out.contains("certificate: (1 (prec 64), -1)\n"));
    assert!(out.contains("effective: no\n"));

    let (out, _) = run_on("inspect", "global-theta.toml", &[]);
    assert!(out.contains("bad_places: [theta]\n"), "{}", out);
}

#[test]
fn malformed_matrix_is_a_parse_error() {
    let p = temp_manifest(
        "bad.toml",
        "[base]\nkind = \"local\"\nq = 2\ntheta = \"1 + pi\"\n\n[motive]\nrank = 1\nmatrix = [[\"t - (theta\"]]\n",
    );
    let out = tmodels(&["inspect", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parse error at line 8, column 23"), "{}", err);
}

#[test]
fn model_reports() {
    let (out, code) = run_on("model", "frob-mismatch.toml", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("condition_cl: no\n"));
    assert!(out.contains("level1_integral_model: O-span[(pi^-1)]\n"));
    assert!(out.contains("integral_model: O_E[t]^r\n"));

    let (out, _) = run_on("model", "pi-scalar.toml", &[]);
    assert!(out.contains("integral_model: O_E[t]^r\n"));
    assert!(out.contains("good_model: 0\n"));
    assert!(out.contains("good_reduction: no\n"));

    let (out, _) = run_on("model", "carlitz.toml", &["--ell", "t", "--n-max", "6"]);
    assert!(out.contains("model_ell: t\n"));
    assert!(out.contains("good_reduction: yes\n"));

    let (out, _) = run_on("model", "global-theta.toml", &[]);
    assert!(
        out.contains("integral_model: ((1)/(theta))*F_2[theta][t]^1\n"),
        "{}",
        out
    );
}

#[test]
fn polygons() {
    let (out, _) = run_on("polygons", "carlitz.toml", &[]);
    assert!(out.contains("hodge_weights: [1]\n"));
    assert!(out.contains("weights: [1]\n"));
    let (out, _) = run_on("polygons", "dual-carlitz.toml", &[]);
    assert!(out.contains("hodge_weights: [-1]\n"));
    assert!(out.contains("weights: [-1]\n"));
    let (out, _) = run_on("polygons", "unit-plus-carlitz.toml", &[]);
    assert!(out.contains("hodge_weights: [0, 1]\n"));
    assert!(out.contains("hodge_vertices: [(0, 0), (1, 0), (2, 1)]\n"));
    assert!(out.contains("weights: [0, 1]\n"));
}

#[test]
fn ext_tests_and_overrides() {
    let (out, code) = run_on("ext", "eta-torsion.toml", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("split: no (Degree"));
    assert!(out.contains("torsion.annihilator: t^2\n"));

    let (out, _) = run_on(
        "ext",
        "carlitz.toml",
        &["--class", "1/pi", "--tests", "integral,good-reduction"],
    );
    assert!(out.contains("integral: no"), "{}", out);
    assert!(
        out.contains("good-reduction: no (Valuation at level 1"),
        "{}",
        out
    );

    let (out, _) = run_on("ext", "global-theta.toml", &[]);
    assert!(out.contains("integral: yes\n"));
    let (out, _) = run_on("ext", "global-theta.toml", &["--class", "theta^-2"]);
    assert!(out.contains("integral: no"));

    let (_, code) = run_on("ext", "carlitz.toml", &["--class", "1", "--tests", "bogus"]);
    assert_eq!(code, 1);
}

#[test]
fn unknown_verdict_exits_with_two() {
    let p = temp_manifest(
        "tri.toml",
        "[base]\nkind = \"local\"\nq = 2\ntheta = \"1 + pi\"\nprecision = 32\n\n[motive]\nrank = 2\n\
         matrix = [[\"1\", \"t\"], [\"0\", \"t - theta\"]]\n\n[task]\nclass = [\"1/pi\", \"0\"]\ntests = [\"split\"]\n",
    );
    let out = tmodels(&["ext", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .ends_with("status: unknown\n"));
}

#[test]
fn precision_flag_and_environment() {
    let path = manifest("carlitz.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_tmodels"))
        .args(["inspect", path.to_str().unwrap()])
        .env("TMODELS_PRECISION", "20")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("precision: 20\n"));
    let (out, _) = run_on("inspect", "carlitz.toml", &["--precision", "24"]);
    assert!(out.contains("precision: 24\n"));
}

#[test]
fn record_format_is_json() {
    let (out, code) = run_on("inspect", "carlitz.toml", &["--format", "record"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr[0]["key"], "command");
    assert_eq!(arr.last().unwrap()["value"], "ok");
}

#[test]
fn reproduce_exit_codes() {
    let out = tmodels(&["reproduce", "frob-mismatch"]);
    assert_eq!(out.status.code(), Some(0));
    let out = tmodels(&["reproduce", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("unknown scenario"));
}

#[test]
fn timing_is_opt_in() {
    let out = tmodels(&["reproduce", "eta-torsion"]);
    assert!(!String::from_utf8(out.stdout)
        .unwrap()
        .contains("elapsed_ms"));
    let out = tmodels(&["reproduce", "eta-torsion", "--timing"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("elapsed_ms"));
}
