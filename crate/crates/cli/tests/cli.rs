//! End-to-end runs of the binary: exit-code contract, report formats, and
//! byte-level determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discrete-appell"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn eval_terminating_origin_is_one_with_exit_zero() {
    let args = [
        "eval", "--variant", "v1", "--a", "1", "--b1", "1", "--b2", "1", "--c1", "2", "--c2",
        "2", "--t1", "2", "--t2", "2", "--k1", "1", "--k2", "1", "--x", "0", "--y", "0",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("value = 1+0i"), "{text}");
    assert!(text.contains("status = Terminated"), "{text}");

    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    let text = stdout_str(&csv);
    assert!(text.starts_with("value_re,value_im,status,terms_used,tail_estimate"), "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("1,0,Terminated,"), "{text}");
}

#[test]
fn eval_v2_step_zero_equals_classical() {
    let shared = [
        "--a", "1.3", "--b1", "0.7", "--b2", "1.1", "--c1", "2.2", "--c2", "1.9", "--x", "0.2",
        "--y", "0.25", "--format", "json",
    ];
    let f2 = run(&[&["eval", "--f2"], &shared[..]].concat());
    let v2 = run(&[&["eval", "--variant", "v2", "--t", "5", "--k", "0"], &shared[..]].concat());
    assert_eq!(f2.status.code(), Some(0));
    assert_eq!(v2.status.code(), Some(0));
    let a: serde_json::Value = serde_json::from_str(&stdout_str(&f2)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout_str(&v2)).unwrap();
    let (ar, br) = (a["value"]["re"].as_f64().unwrap(), b["value"]["re"].as_f64().unwrap());
    assert!((ar - br).abs() <= 1e-13 * ar.abs().max(1.0), "{ar} vs {br}");
}

#[test]
fn eval_v3_equals_v1_with_shared_step() {
    let shared = [
        "--a", "1.3", "--b1", "0.7", "--b2", "1.1", "--c1", "2.2", "--c2", "1.9", "--t1", "3",
        "--t2", "2", "--x", "0.2", "--y", "0.25", "--format", "json",
    ];
    let v3 = run(&[&["eval", "--variant", "v3", "--k", "2"], &shared[..]].concat());
    let v1 = run(&[&["eval", "--variant", "v1", "--k1", "2", "--k2", "2"], &shared[..]].concat());
    assert_eq!(v3.status.code(), Some(0));
    let a: serde_json::Value = serde_json::from_str(&stdout_str(&v3)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout_str(&v1)).unwrap();
    assert_eq!(a["value"]["re"], b["value"]["re"]);
    assert_eq!(a["value"]["im"], b["value"]["im"]);
}

#[test]
fn eval_psi2_needs_no_b_parameters() {
    let out = run(&[
        "eval", "--variant", "v2", "--humbert", "psi2", "--a", "1.2", "--c1", "2.2", "--c2",
        "1.7", "--t", "3", "--k", "1", "--x", "0.3", "--y", "0.2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_str(&out).contains("status = Terminated"));
}

#[test]
fn eval_divergent_regime_exits_two() {
    let out = run(&[
        "eval", "--variant", "v1", "--a", "1.3", "--b1", "0.7", "--b2", "1.1", "--c1", "2.2",
        "--c2", "1.9", "--t1", "0.5", "--t2", "2", "--k1", "1", "--k2", "1", "--x", "0.5",
        "--y", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_str(&out).contains("DivergenceDetected"));
}

#[test]
fn usage_errors_exit_one() {
    // Missing required parameter.
    let out = run(&["eval", "--variant", "v1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown flag (clap error remapped).
    let out = run(&["eval", "--nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    // Bad complex literal.
    let out = run(&[
        "eval", "--f2", "--a", "nope", "--b1", "1", "--c1", "2", "--c2", "2", "--x", "0", "--y",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // Discrete flags inconsistent with the selected variant.
    let out = run(&[
        "eval", "--variant", "v2", "--t1", "3", "--t", "3", "--k", "1", "--a", "1", "--b1", "1",
        "--b2", "1", "--c1", "2", "--c2", "2", "--x", "0.1", "--y", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reduction_family_passes_and_is_deterministic() {
    let args = ["verify", "--family", "reduction", "--seed", "3"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&first)).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["summary"]["pass"], 70);
    assert_eq!(report["suite_version"], "1");
    assert_eq!(report["grid"]["seed"], 3);
    let results = report["results"].as_array().unwrap();
    assert!(results.iter().all(|r| {
        r["id"].as_str().unwrap().starts_with("reduction/")
            && r["passed"].as_bool().unwrap()
            && r["rel_residual"].as_f64().unwrap() <= 1e-12
    }));

    // Identical configuration must produce byte-identical output.
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_integral_family_at_order_64() {
    let out = run(&["verify", "--family", "integral", "--order", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["summary"]["pass"], 11);
    for r in report["results"].as_array().unwrap() {
        assert!(r["rel_residual"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn verify_csv_and_text_formats_render() {
    let csv = run(&["verify", "--family", "humbert-limit", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout_str(&csv);
    assert!(text.starts_with("id,passed,"), "{text}");
    assert!(text.contains("humbert-limit/v1/psi1"));

    let plain = run(&["verify", "--family", "humbert-limit", "--format", "text"]);
    assert!(stdout_str(&plain).contains("summary: pass=4 fail=0 skip=0"));
}

#[test]
fn list_identities_reports_ladder_counts() {
    let out = run(&["list-identities"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    for needle in [
        "ladder-differential/v1: 10",
        "ladder-difference/v2: 10",
        "pairwise-differential/v1: 45",
        "pairwise-difference/v2: 45",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in listing");
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("appell-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.json");
    std::fs::write(
        &path,
        r#"{"f2": true, "a": "1.5", "b1": "2.2", "b2": "1.9", "c1": "2.2", "c2": "1.9", "x": "0.2", "y": "0.3", "format": "json"}"#,
    )
    .unwrap();
    let out = run(&["eval", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    // b1 = c1, b2 = c2: the value is (1 - x - y)^(-a) = 2^1.5.
    let re = report["value"]["re"].as_f64().unwrap();
    assert!((re - 2.0f64.powf(1.5)).abs() < 1e-10, "{re}");

    // An explicit flag overrides the file.
    let out = run(&["eval", "--config", path.to_str().unwrap(), "--a", "0"]);
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((report["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn environment_caps_the_diagonal_budget() {
    let out = bin()
        .env("DISCRETE_APPELL_MAX_DIAGONAL", "4")
        .args([
            "eval", "--f2", "--a", "1.3", "--b1", "0.7", "--b2", "1.1", "--c1", "2.2", "--c2",
            "1.9", "--x", "0.3", "--y", "0.25",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_str(&out).contains("MaxTermsReached"));
}
