//! One test per acceptance criterion; each prints a PASS/FAIL line.

use std::process::Command;

use hypgraph::suites;

fn check(id: u8) {
    let outcome = suites::run(id);
    println!("{outcome}");
    assert!(outcome.pass, "{outcome}");
}

#[test]
fn criterion_1_mass_recovery() {
    check(1);
}

#[test]
fn criterion_2_vacuum_curvature() {
    check(2);
}

#[test]
fn criterion_3_penrose_inequality() {
    check(3);
}

#[test]
fn criterion_4_height_gap_scaling() {
    check(4);
}

#[test]
fn criterion_5_volume_sandwich() {
    check(5);
}

#[test]
fn criterion_6_flat_distance_bound() {
    check(6);
}

#[test]
fn criterion_7_capping() {
    check(7);
}

#[test]
fn criterion_8_core_identities() {
    check(8);
}

fn verify_all(out: &std::path::Path) -> (Vec<String>, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_hypgraph"))
        .args(["verify", "--suite", "all", "--out"])
        .arg(out)
        .output()
        .expect("running the verify subcommand");
    let stdout = String::from_utf8(output.stdout).expect("utf-8 output");
    let verdicts = stdout
        .lines()
        .map(|l| l.split_whitespace().take(2).collect::<Vec<_>>().join(" "))
        .collect();
    (verdicts, std::fs::read(out).expect("report written"))
}

#[test]
fn criterion_9_determinism() {
    let in_process = suites::run(9);
    let dir = tempfile::tempdir().unwrap();
    let (v1, csv1) = verify_all(&dir.path().join("first.csv"));
    let (v2, csv2) = verify_all(&dir.path().join("second.csv"));
    let pass = in_process.pass && v1.len() == 9 && v1 == v2 && csv1 == csv2;
    println!(
        "{} 9 determinism: in-process {}, verdicts {:?}, csv bytes identical {}",
        if pass { "PASS" } else { "FAIL" },
        in_process.pass,
        v1,
        csv1 == csv2
    );
    assert!(pass);
}
