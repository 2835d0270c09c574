//! End-to-end tests of the binary: output shapes, determinism, exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hilbgen"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn yz_matches_expected_counts() {
    assert_eq!(stdout(&["yz", "--order", "3"]).trim(), r#"{"coeffs":[1,24,324,3200]}"#);
}

#[test]
fn hilb_betti_k3_level_two() {
    let out = stdout(&["hilb-betti", "--surface", "k3", "--order", "2"]);
    assert!(out.contains("[1,0,23,0,276,0,23,0,1]"), "{out}");
}

#[test]
fn g2_leading_coefficients() {
    let out = stdout(&["g2", "--order", "3"]);
    assert_eq!(out.trim(), r#"{"coeffs":["-1/24",1,3,4]}"#);
}

#[test]
fn negative_order_is_usage_error() {
    let out = run(&["hilb-betti", "--order", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_fixture_is_usage_error() {
    let out = run(&["hilb-betti", "--surface", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["hilb-betti", "--surface", "abelian", "--order", "4"],
        vec!["orb-poincare", "--surface", "k3", "--order", "3"],
        vec!["fock-check", "--surface", "p2", "--weight-bound", "3", "--level-bound", "2"],
        vec!["k3-check", "--order", "4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn check_exit_codes_reflect_reports() {
    let out = run(&["fock-check", "--surface", "abelian", "--weight-bound", "2", "--level-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["k3-check", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["strata-check", "--surface", "p2", "--order", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn orb_brute_bound_violation() {
    let out = run(&["orb-brute", "--surface", "k3", "--order", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plain_format() {
    let out = stdout(&["yz", "--order", "2", "--format", "plain"]);
    assert!(out.contains("coeffs"), "{out}");
}

#[test]
fn threads_env_is_accepted() {
    let out = bin()
        .env("HILBGEN_THREADS", "1")
        .args(["orb-euler", "--surface", "k3", "--order", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("3200"));
}

#[test]
fn dmvv_roundtrip_via_files() {
    let dir = std::env::temp_dir().join("hilbgen-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("table.txt");
    std::fs::write(&table, "0 0 1\n1 1 2\n").unwrap();
    let out = stdout(&["dmvv", "--counts", table.to_str().unwrap(), "--order", "2"]);
    // (1-p)^-1 (1-p^2)^-1 (1-pqy)^-2 ... : p^1 q^1 y^1 coefficient 2.
    assert!(out.contains("[1,1,1,2]"), "{out}");
}

#[test]
fn surface_fixture_file_roundtrip() {
    let dir = std::env::temp_dir().join("hilbgen-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quadric.json");
    std::fs::write(
        &path,
        r#"{"name":"quadric","betti":[1,0,2,0,1],"chi_o":1,"K2":8}"#,
    )
    .unwrap();
    let out = stdout(&["hilb-euler", "--surface", path.to_str().unwrap(), "--order", "3"]);
    assert!(out.contains(r#""e":4"#), "{out}");
}
