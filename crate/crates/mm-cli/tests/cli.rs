//! End-to-end exercise of every subcommand: JSON round-trips, byte-level
//! determinism, and the exit-code contract (0 pass, 1 verification failure,
//! 2 usage/parameter error).

use std::process::{Command, Output};

fn mm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mm"))
        .args(args)
        .env_remove("MM_MAX_DENOM_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON payload")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_prints_exact_coefficients() {
    let out = mm(&["eval", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--n", "1,0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["coeffs"], serde_json::json!(["-1/2", "1"]));
    assert_eq!(v["monic"], serde_json::json!(true));

    let zero = mm(&["eval", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--n", "0,0"]);
    assert_eq!(json(&zero)["coeffs"], serde_json::json!(["1"]));
}

#[test]
fn eval_rejects_duplicate_c_with_exit_2() {
    let out = mm(&["eval", "--kind", "first", "--beta", "1", "--c", "1/2,1/2", "--n", "1,0"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pairwise distinct"), "stderr: {err}");
}

#[test]
fn json_payload_round_trips_to_equal_rationals() {
    let out = mm(&[
        "eval", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2", "--n", "1,1", "--at",
        "7/5",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for c in v["coeffs"].as_array().unwrap() {
        let r: mm_core::Rational = c.as_str().unwrap().parse().unwrap();
        assert_eq!(r.to_string(), c.as_str().unwrap());
    }
    let value: mm_core::Rational = v["value"].as_str().unwrap().parse().unwrap();
    assert_eq!(value.to_string(), v["value"].as_str().unwrap());
}

#[test]
fn identical_configs_are_byte_identical() {
    let args = [
        "eval", "--kind", "first", "--beta", "3/2", "--c", "1/5,1/3", "--n", "2,1",
    ];
    assert_eq!(stdout(&mm(&args)), stdout(&mm(&args)));
    let sweep = [
        "sweep", "coeffs", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--box", "2,2",
    ];
    assert_eq!(stdout(&mm(&sweep)), stdout(&mm(&sweep)));
}

#[test]
fn rodrigues_agrees_with_eval_at_integer_points() {
    let rod = mm(&[
        "rodrigues", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--n", "1,1", "--x", "3",
    ]);
    assert_eq!(code(&rod), 0);
    let ev = mm(&[
        "eval", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--n", "1,1", "--at", "3",
    ]);
    assert_eq!(json(&rod)["value"], json(&ev)["value"]);
}

#[test]
fn coeffs_reports_negative_second_kind_a() {
    let out = mm(&[
        "coeffs", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2", "--n", "1,1",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["coefficients"]["a"][0], serde_json::json!("-3"));
}

#[test]
fn verify_eigen_exit_codes_follow_the_ordering() {
    let faithful = mm(&[
        "verify", "eigen", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2", "--caps",
        "5,5", "--x", "2",
    ]);
    assert_eq!(code(&faithful), 0);
    let v = json(&faithful);
    assert_eq!(v["residuals"], serde_json::json!(["0", "0"]));

    // the as-printed ordering documents the off-by-one: verification fails
    // with the exact residual in the payload
    let printed = mm(&[
        "verify", "eigen", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2", "--caps",
        "5,5", "--x", "2", "--ordering", "as-printed",
    ]);
    assert_eq!(code(&printed), 1);
    let v = json(&printed);
    assert_ne!(v["residuals"][0], serde_json::json!("0"));
}

#[test]
fn verify_recurrence_and_orthogonality_and_generating_pass() {
    let rec = mm(&[
        "verify", "recurrence", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--box",
        "3,3",
    ]);
    assert_eq!(code(&rec), 0);
    assert_eq!(json(&rec)["pass"], serde_json::json!(true));

    let ortho = mm(&[
        "verify", "orthogonality", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--n",
        "2,1",
    ]);
    assert_eq!(code(&ortho), 0);

    let gen = mm(&[
        "verify", "generating", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2",
        "--depth", "3", "--x-samples", "0,1/3,2",
    ]);
    assert_eq!(code(&gen), 0);
}

#[test]
fn verify_summability_matches_the_dichotomy() {
    let diverging = mm(&[
        "verify", "summability", "--kind", "charlier", "--a", "1", "--x", "1/2", "--t", "1",
    ]);
    assert_eq!(code(&diverging), 0);
    let v = json(&diverging);
    assert_eq!(v["verdict"], serde_json::json!("Diverges"));

    let converging = mm(&[
        "verify", "summability", "--kind", "first", "--beta", "1", "--c", "1/2", "--x", "2",
        "--t", "1/2", "--depth", "30",
    ]);
    assert_eq!(code(&converging), 0);
    assert_eq!(json(&converging)["verdict"], serde_json::json!("Converges"));
}

#[test]
fn verify_commutator_reports_the_nonzero_interior_honestly() {
    let out = mm(&[
        "verify", "commutator", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--caps",
        "5,5",
    ]);
    // raw matrix commutator is nonzero: verification failure (exit 1) with
    // the exact values; the eigenstate action still vanishes
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_ne!(v["raw_interior_max"], serde_json::json!("0"));
    assert_eq!(v["on_eigenstate_max"], serde_json::json!("0"));
}

#[test]
fn verify_duality_and_limit_pass() {
    let duality = mm(&["verify", "duality", "--family", "meixner", "--beta", "1", "--c", "1/2"]);
    assert_eq!(code(&duality), 0);
    let charlier = mm(&["verify", "duality", "--family", "charlier", "--a", "3/2", "--max-n", "8"]);
    assert_eq!(code(&charlier), 0);
    let limit = mm(&[
        "verify", "limit", "--kind", "first", "--a", "1,4/3", "--n", "1,1", "--x", "2",
    ]);
    assert_eq!(code(&limit), 0);
}

#[test]
fn sweep_coeffs_emits_one_row_per_index() {
    let out = mm(&[
        "sweep", "coeffs", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--box", "3,3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 1 + 16, "header plus 4x4 box");
    assert_eq!(lines[0], "n1,n2,b1,b2,a1,a2");

    let empty = mm(&[
        "sweep", "coeffs", "--kind", "first", "--beta", "1", "--c", "1/3,1/2", "--box", "",
    ]);
    assert_eq!(code(&empty), 0);
    assert_eq!(stdout(&empty).trim().lines().count(), 1);
}

#[test]
fn sweep_summability_verdict_pattern() {
    let out = mm(&[
        "sweep", "summability", "--kind", "charlier", "--a", "1", "--t", "1", "--x-grid",
        "0,1/2,1,3/2,2", "--depth", "20",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let verdicts: Vec<&str> = text
        .trim()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(
        verdicts,
        vec!["Converges", "Diverges", "Converges", "Diverges", "Converges"]
    );
}

#[test]
fn export_operator_round_trips() {
    let out = mm(&[
        "export-operator", "--kind", "second", "--betas", "1/2,3/4", "--c", "1/2", "--caps",
        "2,2", "--op", "hamiltonian", "--mode", "1",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["dim"], serde_json::json!(9));
    let entries = v["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        let value: mm_core::Rational = e[2].as_str().unwrap().parse().unwrap();
        assert_eq!(value.to_string(), e[2].as_str().unwrap());
    }
}

#[test]
fn params_json_escape_hatch() {
    let out = mm(&[
        "eval",
        "--kind",
        "first",
        "--params-json",
        r#"{"beta": "1", "c": ["1/3", "1/2"]}"#,
        "--n",
        "1,0",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["coeffs"], serde_json::json!(["-1/2", "1"]));
}

#[test]
fn denominator_cap_aborts_with_exit_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_mm"))
        .args([
            "verify", "orthogonality", "--kind", "first", "--beta", "1", "--c", "1/3,1/2",
            "--n", "2,1",
        ])
        .env("MM_MAX_DENOM_BITS", "10")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("MM_MAX_DENOM_BITS"), "stderr: {err}");
}

#[test]
fn unknown_kind_is_a_usage_error() {
    let out = mm(&["eval", "--kind", "third", "--beta", "1", "--c", "1/2", "--n", "1"]);
    assert_eq!(code(&out), 2);
}
