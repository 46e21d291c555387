//! End-to-end checks of the command-line surface and its documented
//! exit codes: 0 success, 1 parse/input error, 2 precondition violation.

use std::path::PathBuf;
use std::process::Command;

fn rbs() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rbs"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = rbs().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn eval_emits_a_report() {
    let (code, stdout, _) = run(&["eval", fixture("example5.rbs").to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["schema"], "rbs-report/1");
    assert_eq!(v["betti"], serde_json::json!([1, 0, 1, 1, 1, 1, 1]));
}

#[test]
fn eval_with_json_output_and_distinguish() {
    let dir = std::env::temp_dir().join(format!("rbs-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let (code, _, _) = run(&[
        "eval",
        fixture("example5.rbs").to_str().unwrap(),
        "--json",
        a.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&[
        "eval",
        fixture("bouquet_module_match.rbs").to_str().unwrap(),
        "--json",
        b.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["distinguish", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Distinguished"), "{stdout}");
    assert!(stdout.contains("product_profile (2,3)"), "{stdout}");
    // agreement case
    let (code, stdout, _) = run(&["distinguish", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("InvariantsAgree"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn eval_coeff_override() {
    let (code, stdout, _) = run(&[
        "eval",
        fixture("example5.rbs").to_str().unwrap(),
        "--coeff",
        "Q",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["coeff"], "Q");
}

#[test]
fn parse_errors_exit_one() {
    for name in ["errors/missing_base.rbs", "errors/unknown_manifold.rbs"] {
        let (code, _, stderr) = run(&["eval", fixture(name).to_str().unwrap()]);
        assert_eq!(code, 1, "{name}: {stderr}");
    }
    // unreadable path
    let (code, _, _) = run(&["eval", "/no/such/script.rbs"]);
    assert_eq!(code, 1);
}

#[test]
fn precondition_violations_exit_two() {
    let (code, _, stderr) = run(&[
        "eval",
        fixture("errors/bad_precondition.rbs").to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("step 0"), "{stderr}");
    // oracle preconditions exit 2 as well
    let (code, _, _) = run(&["oracle", "verify-prop3", "--n", "9", "--s", "S1"]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_verify_prop3_runs() {
    let (code, stdout, _) = run(&["oracle", "verify-prop3", "--n", "3", "--s", "S1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["matches"], true);
    // bouquet syntax
    let (code, stdout, _) = run(&["oracle", "verify-prop3", "--n", "3", "--s", "[point]"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["matches"], true);
    // budget exhaustion is a precondition violation
    let (code, _, _) = run(&[
        "oracle",
        "verify-prop3",
        "--n",
        "3",
        "--s",
        "S1",
        "--budget",
        "5",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn certify_thm3_outcomes() {
    let (code, stdout, _) = run(&["certify-thm3", fixture("example5.rbs").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Certified"), "{stdout}");
    let (code, stdout, _) = run(&["certify-thm3", fixture("example5_r1.rbs").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("NotApplicable"), "{stdout}");
    let (code, stdout, _) = run(&["certify-thm3", fixture("example5_z5.rbs").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("finite order"), "{stdout}");
}

#[test]
fn roundtrip_prints_canonical_form() {
    let (code, stdout, _) = run(&["roundtrip", fixture("example5.rbs").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "coeff Z\nbase sg n=6 [S2]\nstep thm2 k=1 kp=2 r0=2\n"
    );
    let (code, _, _) = run(&[
        "roundtrip",
        fixture("errors/unknown_manifold.rbs").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn budget_env_variable_is_honored() {
    let out = rbs()
        .args(["oracle", "verify-prop3", "--n", "3", "--s", "S1"])
        .env("RBS_ORACLE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
