//! End-to-end runs of the `dshuffle` binary.

use std::process::Command;

use dshuffle::cli::golden_corpus;

fn dshuffle(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dshuffle")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn golden_values() {
    for case in golden_corpus() {
        assert!(case.passed(), "{}: expected {}, got {}", case.name, case.expected, case.actual);
    }
}

#[test]
fn verify_generator() {
    let (code, out, _) = dshuffle(&["verify", "--gen", "psi3", "--max-depth", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().last().unwrap().contains("0 failed") || !out.contains("FAIL"), "{out}");
}

#[test]
fn verify_element_file_failure_exits_one() {
    let dir = std::env::temp_dir().join(format!("dshuffle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("odd.txt");
    std::fs::write(&path, "(x1)").unwrap();
    let (code, out, _) = dshuffle(&["verify", "--element", path.to_str().unwrap(), "--target", "pls", "--depth", "1"]);
    assert_eq!(code, 1, "{out}");
    let path = dir.join("pair.txt");
    std::fs::write(&path, "1/(x1*(x2-x1))").unwrap();
    let (code, _, err) = dshuffle(&["res", "--element", path.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(code, 0, "{err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dshuffle(&["gen", "psi"]).0, 2);
    assert_eq!(dshuffle(&["dims", "--space", "nowhere", "--max-weight", "4"]).0, 2);
    assert_eq!(dshuffle(&["--format", "yaml", "dims", "--space", "Pe", "--max-weight", "4"]).0, 2);
}

#[test]
fn json_outputs_are_stable() {
    let a = dshuffle(&["--format", "json", "decompose", "--weight", "5", "--max-depth", "3"]);
    let b = dshuffle(&["--format", "json", "decompose", "--weight", "5", "--max-depth", "3"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let v: serde_json::Value = serde_json::from_str(a.1.trim()).unwrap();
    assert_eq!(v["weight"], 5);
    assert_eq!(v["terms"][1]["coeff"], "-1/60");
}

#[test]
fn jobs_variable_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_dshuffle"))
        .args(["coeff", "--weight", "5", "--max-depth", "3", "--word", "3,1,1"])
        .env("DSHUFFLE_JOBS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let parallel = dshuffle(&["coeff", "--weight", "5", "--max-depth", "3", "--word", "3,1,1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), parallel.1);
}

#[test]
fn vines_listing() {
    let (code, out, _) = dshuffle(&["gen", "vine", "--n", "3", "--list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
}
