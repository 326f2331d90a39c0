//! End-to-end coverage of the `isopar` binary: exit codes, report formats,
//! polynomial dumps, and seed handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_isopar"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("ISOPAR_SEED")
        .output()
        .expect("spawn isopar")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn cm_suite_passes_with_exit_zero() {
    let out = run(&["suite", "cm", "--example", "h45"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("PASS  cm:gradient-identity"));
    assert!(text.contains("PASS  cm:laplacian-identity"));
    assert!(text.contains("OK: 2/2 checks passed"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["suite", "cm", "--example", "wrong"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_roundtrips() {
    let out = run(&[
        "suite", "circ", "--example", "h45", "--seed", "5", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: isopar::report::Report =
        serde_json::from_str(&stdout_str(&out)).expect("parse report");
    assert_eq!(report.suite, "circ");
    assert_eq!(report.example, "h45");
    assert_eq!(report.seed, 5);
    assert!(report.passed());
    // re-serialization is the identity on the parsed value
    let again: isopar::report::Report =
        serde_json::from_str(&report.to_json()).expect("reparse");
    assert_eq!(again.to_json(), report.to_json());
}

#[test]
fn reports_are_deterministic_for_fixed_seed() {
    let zeroed = |out: &Output| {
        let mut r: isopar::report::Report =
            serde_json::from_str(&stdout_str(out)).expect("parse report");
        for c in r.checks.iter_mut() {
            c.wall_ms = 0;
        }
        r.to_json()
    };
    let args = [
        "suite", "pencil", "--example", "h45", "--seed", "42", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(zeroed(&a), zeroed(&b));
}

#[test]
fn seed_env_var_and_flag_precedence() {
    let with_env = Command::new(bin())
        .args(["suite", "circ", "--example", "h45", "--format", "json"])
        .env("ISOPAR_SEED", "17")
        .output()
        .expect("spawn");
    let r: isopar::report::Report = serde_json::from_str(&stdout_str(&with_env)).unwrap();
    assert_eq!(r.seed, 17);

    let with_both = Command::new(bin())
        .args([
            "suite", "circ", "--example", "h45", "--format", "json", "--seed", "3",
        ])
        .env("ISOPAR_SEED", "17")
        .output()
        .expect("spawn");
    let r: isopar::report::Report = serde_json::from_str(&stdout_str(&with_both)).unwrap();
    assert_eq!(r.seed, 3, "the flag beats the environment");
}

#[test]
fn out_file_and_unwritable_path() {
    let dir = std::env::temp_dir().join("isopar-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "suite",
        "mirror",
        "--example",
        "h45",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let r: isopar::report::Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.suite, "mirror");

    let out = run(&[
        "suite",
        "mirror",
        "--example",
        "h45",
        "--out",
        "/nonexistent-dir/report.txt",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn build_dumps_match_the_library_polynomials() {
    let out = run(&["build", "h45"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let p = isopar::poly::poly_from_json(&v).unwrap();
    assert_eq!(p, isopar::geometry::build_f_45());

    let out = run(&["build", "fkm69"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let p = isopar::poly::poly_from_json(&v).unwrap();
    assert_eq!(p.nvars(), 32);
    assert!(p.is_homogeneous(4));
}

#[test]
fn both_examples_render_two_reports() {
    let out = run(&["suite", "mirror", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Vec<isopar::report::Report> = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v.len(), 2);
    assert_eq!(v[0].example, "h45");
    assert_eq!(v[1].example, "fkm69");
}

#[test]
fn build_frame_dump() {
    let out = run(&["build", "h45", "--frame"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["ambient_dim"], 20);
    assert_eq!(v["eplus"].as_array().unwrap().len(), 5);
    assert_eq!(v["ezero"].as_array().unwrap().len(), 4);
}
