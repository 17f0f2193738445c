//! End-to-end tests against the built binary.

use std::process::{Command, Output};

fn igusa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igusa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeta_local_spec_example() {
    let out = igusa(&[
        "zeta",
        "--local",
        "-f",
        "x^2",
        "--vars",
        "x",
        "-p",
        "3",
        "--char-order",
        "2",
        "--char-index",
        "1",
    ]);
    let v = stdout_json(&out);
    // 2T^2/(9 - 3T^2) in canonical factored form: (2/3) T^2 / (3 - T^2)
    assert_eq!(v["q"], 3);
    assert_eq!(v["char"]["d"], 2);
    assert_eq!(v["numerator"][2][0], "2/3");
    assert_eq!(v["denominator_factors"][0]["nu"], 1);
    assert_eq!(v["denominator_factors"][0]["N"], 2);
    assert_eq!(v["actual_pole_lines"][0]["N"], 2);

    // requesting both modes nests them under one object
    let out = igusa(&[
        "zeta",
        "-f",
        "x^2",
        "--vars",
        "x",
        "-p",
        "3",
        "--char-order",
        "2",
    ]);
    let v = stdout_json(&out);
    assert!(v["local"].is_object() && v["global"].is_object());
    assert_eq!(v["global"]["numerator"][0][0], "2");
}

#[test]
fn monodromy_cusp_spec_example() {
    let out = igusa(&["monodromy", "-f", "x^2+y^3", "--vars", "x,y", "--origin"]);
    let v = stdout_json(&out);
    let factors = v["factors"].as_array().unwrap();
    let got: Vec<(u64, i64)> = factors
        .iter()
        .map(|f| (f["e"].as_u64().unwrap(), f["exp"].as_i64().unwrap()))
        .collect();
    assert_eq!(got, vec![(2, 1), (3, 1), (6, -1)]);
    assert_eq!(
        v["eigenvalue_orders"].as_array().unwrap().len(),
        2 // orders 1 and 6
    );
}

#[test]
fn oracle_compare_spec_example() {
    let out = igusa(&[
        "oracle-compare",
        "-f",
        "x^2",
        "--vars",
        "x",
        "-p",
        "3",
        "--char-order",
        "2",
        "--terms",
        "2",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["oracle_series"][0][0], "2/3");
    assert_eq!(v["oracle_series"][1][0], "0");
    assert_eq!(v["oracle_series"][2][0], "2/9");
}

#[test]
fn newton_json_roundtrip_reproduces_zeta() {
    let dump = igusa(&["newton", "-f", "x^2+y^3+z^2", "--vars", "x,y,z"]);
    assert!(dump.status.success());
    let dir = std::env::temp_dir().join("igusa-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gamma.json");
    std::fs::write(&path, &dump.stdout).unwrap();

    let direct = igusa(&[
        "zeta",
        "-f",
        "x^2+y^3+z^2",
        "--vars",
        "x,y,z",
        "-p",
        "7",
        "--char-order",
        "6",
    ]);
    let via_json = igusa(&[
        "zeta",
        "-f",
        "x^2+y^3+z^2",
        "--vars",
        "x,y,z",
        "-p",
        "7",
        "--char-order",
        "6",
        "--from-json",
        path.to_str().unwrap(),
    ]);
    assert!(direct.status.success() && via_json.status.success());
    assert_eq!(direct.stdout, via_json.stdout);
}

#[test]
fn classify_reports_x2() {
    let out = igusa(&["classify", "-f", "x^3+y^2+x^2z^2", "--vars", "x,y,z"]);
    let v = stdout_json(&out);
    let kinds: Vec<&str> = v["facets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"X2"), "{kinds:?}");
}

#[test]
fn check_explains_cusp_pole() {
    let out = igusa(&[
        "check",
        "-f",
        "x^2+y^3",
        "--vars",
        "x,y",
        "-p",
        "7",
        "--char-order",
        "6",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"]["kind"], "pole_explained");
    assert_eq!(v["verdict"]["order"], 6);
}

#[test]
fn suites_are_seed_deterministic() {
    let a = igusa(&[
        "nv-suite",
        "--seed",
        "7",
        "--count-3d",
        "25",
        "--count-4d",
        "10",
    ]);
    let b = igusa(&[
        "nv-suite",
        "--seed",
        "7",
        "--count-3d",
        "25",
        "--count-4d",
        "10",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = igusa(&["cancel-suite", "--seed", "11", "--count", "1"]);
    let b = igusa(&["cancel-suite", "--seed", "11", "--count", "1"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let a = igusa(&[
        "verify-lemmas",
        "--primes",
        "3,5",
        "--per-char",
        "5",
        "--seed",
        "3",
        "--a-max",
        "6",
        "--conic-a-max",
        "3",
        "--conic-i-max",
        "1",
    ]);
    let b = igusa(&[
        "verify-lemmas",
        "--primes",
        "3,5",
        "--per-char",
        "5",
        "--seed",
        "3",
        "--a-max",
        "6",
        "--conic-a-max",
        "3",
        "--conic-i-max",
        "1",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn degenerate_input_fails_with_domain_error() {
    let out = igusa(&[
        "zeta",
        "--local",
        "-f",
        "x^2+2x*y+y^2",
        "--vars",
        "x,y",
        "-p",
        "3",
        "--char-order",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error");
    assert_eq!(err["error"]["kind"], "degenerate");
    // the force override computes anyway and flags the output
    let out = igusa(&[
        "zeta",
        "--local",
        "-f",
        "x^2+2x*y+y^2",
        "--vars",
        "x,y",
        "-p",
        "3",
        "--char-order",
        "2",
        "--force",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["untrusted"], true);
}

#[test]
fn usage_errors_exit_2() {
    let out = igusa(&["zeta", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}
