//! Acceptance criteria 1 to 10. Each test prints one PASS/FAIL line
//! (`cargo test --test acceptance -- --nocapture --test-threads=1` to read them in order).

use std::process::Command;

use cpa_cli::verify::{self, CriterionResult, VerifyOptions};

fn report(r: CriterionResult) {
    println!("{r}");
    assert!(r.passed, "{r}");
}

#[test]
fn criterion_01_simple_ratio() {
    report(verify::simple_ratio());
}

#[test]
fn criterion_02_improved_integral() {
    report(verify::improved_integral());
}

#[test]
fn criterion_03_improved_monte_carlo() {
    report(verify::improved_monte_carlo(VerifyOptions::default()));
}

#[test]
fn criterion_04_weak_value_correspondence() {
    report(verify::weak_value_correspondence());
}

#[test]
fn criterion_05_negative_weak_value() {
    report(verify::negative_weak_value());
}

#[test]
fn criterion_06_interferometer_certainty() {
    report(verify::interferometer_certainty());
}

#[test]
fn criterion_07_cascade() {
    report(verify::cascade());
}

#[test]
fn criterion_08_entangled_pair() {
    report(verify::entangled_pair(VerifyOptions::default().seed));
}

#[test]
fn criterion_09_conservation() {
    report(verify::conservation(VerifyOptions::default().seed));
}

#[test]
fn criterion_10_verify_subcommand() {
    let out = Command::new(env!("CARGO_BIN_EXE_cpa"))
        .arg("verify")
        .output()
        .expect("spawn cpa");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let lines = stdout.lines().filter(|l| l.starts_with("criterion")).count();
    let passed = out.status.code() == Some(0) && lines == 9 && !stdout.contains("FAIL");
    let r = CriterionResult {
        id: 10,
        name: "verify subcommand",
        passed,
        detail: format!("exit code {:?}, {lines} criterion lines", out.status.code()),
    };
    if !passed {
        eprintln!("{stdout}");
    }
    report(r);
}
