use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use periodic_interp::{Couple, Element, Exponent};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_periodic-interp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn constants_csv_has_frozen_header_and_error_rows() {
    let out = run(&["constants", "--lambda", "2,8,1e-300,128", "--alpha", "0.5", "--optimize"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,alpha,delta,rho,c1,m,c_main,c_general,c_opt,delta_opt,rho_opt");
    assert_eq!(lines.len(), 5);
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if i == 2 {
            assert!(line.starts_with("1e-300,0.5,"));
            assert!(line.contains("error"));
        } else {
            assert_eq!(fields.len(), 11, "{line}");
            let c_main: f64 = fields[6].parse().unwrap();
            let c_opt: f64 = fields[8].parse().unwrap();
            assert!(c_opt <= c_main);
            assert!(fields[7].is_empty());
        }
    }
}

#[test]
fn constants_json_reports_c_general() {
    let out = run(&["constants", "--lambda", "4", "--delta", "0.25", "--rho", "0.25", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let row = &v[0];
    assert_eq!(row["lambda"], 4.0);
    let g = row["c_general"].as_f64().unwrap();
    let m = row["c_main"].as_f64().unwrap();
    assert!((g - m).abs() <= 1e-13 * m);
    assert!(row["c1"].is_null());
}

#[test]
fn sandwich_is_deterministic_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let out = run(&[
            "sandwich", "--seed", "7", "--n", "3", "--p0", "1", "--p1", "inf", "--theta", "0.3,0.6", "--lambda", "4",
            "--laurent-N", "6", "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        for key in [
            "lambda", "theta", "couple", "a", "oracle", "upper_constructive", "upper_solver", "c_main", "c_opt",
            "ratio_solver", "ratio_constructive", "slack", "config", "seed",
        ] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["seed"], 7);
        assert_eq!(r["config"]["version"], periodic_interp::normsolver::ARTIFACT_VERSION);
        assert_eq!(r["couple"]["p1"], "inf");
        assert!(r["oracle"].as_f64().unwrap() <= r["upper_solver"].as_f64().unwrap() * (1.0 + 1e-6));
    }
}

#[test]
fn sandwich_rejects_uncertifiable_sampling() {
    let out = run(&["sandwich", "--p0", "1", "--p1", "2", "--laurent-N", "3", "--oversample", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certification"));
    let out = run(&["sandwich", "--p0", "0.5", "--p1", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

fn write_thorin(dir: &Path) -> (std::path::PathBuf, Element) {
    let couple = Couple::new(Exponent::Finite(1.0), Exponent::Infinite, vec![0.5, 2.0, 1.0]).unwrap();
    let a = Element::from_parts(&[1.0, -0.4, 0.2], &[0.3, 0.0, -1.1]).unwrap();
    let f = couple.thorin_extremal(&a, 0.4).unwrap().function.damp(0.01, 0.4).unwrap();
    let path = dir.join("f.json");
    let body = serde_json::json!({ "couple": couple, "function": f });
    std::fs::write(&path, serde_json::to_string(&body).unwrap()).unwrap();
    (path, a)
}

#[test]
fn periodize_reports_bounds_and_laurent_projection() {
    let dir = tempfile::tempdir().unwrap();
    let (input, a) = write_thorin(dir.path());
    let out = run(&["periodize", "--input", input.to_str().unwrap(), "--lambda", "4", "--kernel", "w", "--emit-laurent", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["K"].as_u64().unwrap() >= 1);
    let tail = v["tail_bound"].as_f64().unwrap();
    assert!(v["fstrip_norm"].as_f64().unwrap() <= v["norm_bound_rhs"].as_f64().unwrap());
    let at: Element = serde_json::from_value(v["value_at_theta"].clone()).unwrap();
    assert!(at.sub(&a).max_modulus() <= tail + 1e-10);
    assert_eq!(v["laurent"]["N"], 8);
    assert_eq!(v["laurent"]["coeffs"].as_array().unwrap().len(), 17);
}

#[test]
fn periodize_rejects_mismatched_centre_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let (input, _) = write_thorin(dir.path());
    let out = run(&["periodize", "--input", input.to_str().unwrap(), "--lambda", "4", "--theta", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"theta\": 2.0, \"terms\": [[]]}").unwrap();
    let out = run(&["periodize", "--input", bad.to_str().unwrap(), "--lambda", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["periodize", "--input", "/nonexistent/f.json", "--lambda", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_claims_passes_and_detects_a_weakened_constant() {
    let first = run(&["verify", "--suite", "claims"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let summary = stdout_json(&first);
    assert_eq!(summary["passed"], true);
    let ids: Vec<u64> = summary["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [1, 2, 3, 4, 6, 8]);

    let perturbed = run(&["verify", "--suite", "claims", "--c1-offset", "1e-6"]);
    assert_eq!(perturbed.status.code(), Some(1));
    let summary = stdout_json(&perturbed);
    assert_eq!(summary["passed"], false);
    assert_eq!(summary["criteria"][0]["passed"], false);
    assert!(String::from_utf8_lossy(&perturbed.stderr).contains("FAIL criterion 1"));
}

#[test]
fn unknown_suite_is_a_configuration_error() {
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
}
