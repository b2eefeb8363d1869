use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asymtail"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn asymtail")
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn validate(schema: &str, doc: &Value) {
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("asymtail-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_dist(name: &str, atoms: &[(f64, f64)]) -> PathBuf {
    let atoms: Vec<Value> = atoms
        .iter()
        .map(|&(v, p)| serde_json::json!({ "v": v, "p": p }))
        .collect();
    let path = tmp(name);
    std::fs::write(&path, serde_json::json!({ "atoms": atoms }).to_string()).unwrap();
    path
}

#[test]
fn thresholds_point_matches_known_value() {
    let o = run(&["thresholds", "--p", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("thresholds", &v);
    let ms = v["point"]["m_star"].as_f64().unwrap();
    assert!((ms - 1.75).abs() < 1e-12);
}

#[test]
fn thresholds_full_output_validates() {
    let o = run(&[
        "thresholds",
        "--p",
        "0.2",
        "--m",
        "2",
        "--alpha",
        "3",
        "--beta",
        "0",
        "--table",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("thresholds", &v);
    let c = v["constant"]["c"].as_f64().unwrap();
    assert!((c - 2.0 * 1f64.exp().powi(3) / 9.0).abs() < 1e-12);
    assert_eq!(v["table"].as_array().unwrap().len(), 4);
}

#[test]
fn thresholds_curve_csv() {
    let o = run(&["thresholds", "--curve", "m-star", "--grid", "0.1:0.5:0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,m_star");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[1] - 1.0).abs() < 1e-12);
}

#[test]
fn bound_rademacher_hoeffding_value() {
    let o = run(&[
        "bound", "--p", "0.5", "--n", "4", "--coeffs", "1,1,1,1", "--x", "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("bound", &v);
    let pt = &v["points"][0];
    assert!((pt["hoeffding"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert!(pt["minimum"].as_f64().unwrap() <= 0.0625 + 1e-15);
}

#[test]
fn bound_grid_with_normal_term() {
    let o = run(&[
        "bound",
        "--p",
        "0.5",
        "--coeffs",
        "1,1,1,1,1,1",
        "--x-grid",
        "0:6:0.5",
        "--normal",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("bound", &v);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 13);
    assert!(pts.iter().all(|p| p["normal_dom"].is_number()));
}

#[test]
fn bound_csv_header() {
    let o = run(&[
        "bound", "--p", "0.3", "--coeffs", "1,2", "--x", "1,2", "--report", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "x,b_opt,lc_bound,lin_lc_bound,hoeffding,normal_dom,minimum,argmin"
    );
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn majorant_output_validates() {
    for kind in ["lc", "lin-lc"] {
        let o = run(&["majorant", "--p", "0.3", "--n", "3", "--kind", kind]);
        assert_eq!(o.status.code(), Some(0));
        let v = stdout_json(&o);
        validate("majorant", &v);
        for pt in v["points"].as_array().unwrap() {
            let (t, m) = (
                pt["tail"].as_f64().unwrap(),
                pt["majorant"].as_f64().unwrap(),
            );
            assert!(m >= t * (1.0 - 1e-12));
        }
    }
}

#[test]
fn majorant_from_dist_file() {
    let d = write_dist("maj.json", &[(-1.0, 0.25), (0.0, 0.5), (2.0, 0.25)]);
    let o = run(&["majorant", "--dist", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    validate("majorant", &stdout_json(&o));
}

#[test]
fn verify_all_is_deterministic_and_validates() {
    let args = [
        "verify",
        "--suite",
        "all",
        "--seed",
        "7",
        "--samples",
        "20000",
        "--resolution",
        "60",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    validate("verify", &v);
    assert_eq!(v["pass"], Value::Bool(true));
    let suites: std::collections::BTreeSet<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites.len(), 5);
}

#[test]
fn verify_seed_changes_random_checks() {
    let a = run(&["verify", "--suite", "enumeration", "--seed", "1"]);
    let b = run(&["verify", "--suite", "enumeration", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn verify_below_threshold_is_not_a_failure() {
    let o = run(&["verify", "--suite", "enumeration", "--p", "0.2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let c = &v["checks"][0];
    assert_eq!(c["detail"]["expected_pass"], Value::Bool(false));
}

#[test]
fn selfnorm_csv_and_manifest() {
    let d = write_dist("sn.json", &[(-1.0, 2.0 / 3.0), (2.0, 1.0 / 3.0)]);
    let manifest = tmp("manifest.json");
    let o = run(&[
        "selfnorm",
        "--dist",
        d.to_str().unwrap(),
        "--p",
        "0.3333333333333333",
        "--n",
        "6",
        "--samples",
        "20000",
        "--kind",
        "vw",
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("x,hits,empirical,ci_low,ci_high,ci_half_width,bound,pass\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    validate("manifest", &m);
    assert_eq!(m["seed"], Value::from(0));
}

#[test]
fn selfnorm_json_validates() {
    let d = write_dist("sn_sym.json", &[(-1.0, 0.5), (1.0, 0.5)]);
    let o = run(&[
        "selfnorm",
        "--dist",
        d.to_str().unwrap(),
        "--p",
        "0.5",
        "--n",
        "4",
        "--samples",
        "5000",
        "--report",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    validate("selfnorm", &v);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn selfnorm_symmetric_only_kind_on_asymmetric_law_is_usage_error() {
    let d = write_dist("sn_asym.json", &[(-1.0, 2.0 / 3.0), (2.0, 1.0 / 3.0)]);
    let o = run(&[
        "selfnorm",
        "--dist",
        d.to_str().unwrap(),
        "--p",
        "0.34",
        "--kind",
        "v",
        "--samples",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(run(&["thresholds", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(
        run(&["bound", "--p", "0", "--coeffs", "1", "--x", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["bound", "--p", "0.3", "--coeffs", "1,-1", "--x", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["selfnorm", "--dist", "/nonexistent.json", "--p", "0.3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn asymmetry_breach_exits_2() {
    let d = write_dist("breach.json", &[(-1.0, 2.0 / 3.0), (2.0, 1.0 / 3.0)]);
    let o = run(&[
        "selfnorm",
        "--dist",
        d.to_str().unwrap(),
        "--p",
        "0.5",
        "--samples",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(-1, 2)"));
}

#[test]
fn out_flag_writes_file() {
    let path = tmp("bound.json");
    let o = run(&[
        "bound",
        "--p",
        "0.4",
        "--coeffs",
        "1",
        "--x",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate("bound", &v);
}
