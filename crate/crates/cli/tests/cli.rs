//! End-to-end tests of the command-line surface: wire formats, exit
//! codes, and determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cone-spectra"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cone-spectra")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("stdout line")).expect("stdout JSON")
}

#[test]
fn curve_circle_summary_reports_length_pi() {
    let out = run(&["curve", "--spec", r#"{"kind":"circle","theta":0.5236}"#]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let length = v["length"].as_f64().unwrap();
    assert!((length - std::f64::consts::PI).abs() < 1e-4, "{length}");
    assert_eq!(v["schema"], 1);
    assert!(v["gauss_bonnet_residual"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn repeated_sample_point_exits_3() {
    let n = 64;
    let mut points: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            [0.5 * phi.cos(), -0.5 * phi.sin(), 0.75f64.sqrt()]
        })
        .collect();
    points[10] = points[40];
    let spec = serde_json::json!({"kind": "samples", "points": points}).to_string();
    let out = run(&["curve", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn synthetic_profile_csv_has_plateau_value() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("profile.csv");
    let out = run(&[
        "curve",
        "--spec",
        r#"{"kind":"synthetic","length":6.2831853072,"baseline":0.2,"windows":{"m":1,"eps":0.1}}"#,
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let body = std::fs::read_to_string(&csv_path).unwrap();
    assert!(body.starts_with("s,kappa\n"));
    let max_kappa = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(f64::MIN, f64::max);
    let plateau = 1.0 / 0.1f64.tan();
    assert!(
        (max_kappa - plateau).abs() < 1e-9,
        "{max_kappa} vs {plateau}"
    );
}

#[test]
fn window_overlap_exits_3() {
    let out = run(&[
        "curve",
        "--spec",
        r#"{"kind":"synthetic","length":1.0,"baseline":0.2,"windows":{"m":2,"eps":0.3}}"#,
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn ks_circle_quarter_pi() {
    let out = run(&["ks", "--spec", r#"{"kind":"circle","theta":0.7853981634}"#]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let k_s = v["k_S"].as_f64().unwrap();
    assert!(
        (k_s - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-6,
        "{k_s}"
    );
    assert_eq!(v["negative"].as_array().unwrap().len(), 1);
}

#[test]
fn ks_great_circle_warns_and_reports_zero() {
    let out = run(&[
        "ks",
        "--spec",
        r#"{"kind":"circle","theta":1.5707963267948966}"#,
    ]);
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["k_S"].as_f64().unwrap(), 0.0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("flat cross-section"), "{stderr}");
}

#[test]
fn count_flat_profile_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("counts.csv");
    let out = run(&[
        "count",
        "--spec",
        r#"{"kind":"circle","theta":1.5707963267948966}"#,
        "--model",
        "delta",
        "--emin",
        "1e-10",
        "--emax",
        "1e-4",
        "--per-decade",
        "4",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let body = std::fs::read_to_string(&csv_path).unwrap();
    for line in body.lines().skip(1) {
        assert_eq!(line.split(',').nth(1).unwrap(), "0", "{line}");
    }
    let slope = stdout_json(&out);
    assert_eq!(slope["slope"].as_f64().unwrap(), 0.0);
}

#[test]
fn count_reports_slope_near_k_s() {
    let out = run(&[
        "count",
        "--spec",
        r#"{"kind":"circle","theta":0.7853981634}"#,
        "--model",
        "layer-d",
        "--emin",
        "1e-12",
        "--emax",
        "1e-3",
    ]);
    assert!(out.status.success(), "{out:?}");
    let v = stdout_json(&out);
    let slope = v["slope"].as_f64().unwrap();
    let k_s = v["k_S_reference"].as_f64().unwrap();
    assert!(
        (slope - k_s).abs() < 0.15 * k_s,
        "slope {slope} vs k_S {k_s}"
    );
}

#[test]
fn malformed_spec_exits_2() {
    let out = run(&["curve", "--spec", r#"{"kind":"heptagon"}"#]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn unknown_schema_major_rejected() {
    let out = run(&[
        "curve",
        "--spec",
        r#"{"schema":2,"kind":"circle","theta":0.5}"#,
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("schema major"), "{stderr}");
    // an explicit schema 1 is accepted
    let out = run(&[
        "curve",
        "--spec",
        r#"{"schema":1,"kind":"circle","theta":0.5}"#,
    ]);
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn model1d_methods_agree() {
    let t = stdout_json(&run(&["model1d", "--L", "5", "--bc", "d"]));
    let f = stdout_json(&run(&[
        "model1d", "--L", "5", "--bc", "d", "--method", "fd",
    ]));
    let lt = t["lambda1"].as_f64().unwrap();
    let lf = f["lambda1"].as_f64().unwrap();
    assert!((lt - lf).abs() < 1e-6, "{lt} vs {lf}");
    assert_eq!(t["method"], "transcendental");
    assert_eq!(f["method"], "finite_difference");
    assert_eq!(t["bc"], "D");
}

#[test]
fn validate_quick_is_deterministic_and_green() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let out1 = run(&[
        "validate",
        "--quick",
        "--seed",
        "7",
        "--out",
        a.to_str().unwrap(),
    ]);
    let out2 = run(&[
        "validate",
        "--quick",
        "--seed",
        "7",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out1.status.success(), "{out1:?}");
    assert!(out2.status.success(), "{out2:?}");
    let ba = std::fs::read(&a).unwrap();
    let bb = std::fs::read(&b).unwrap();
    assert_eq!(ba, bb, "quick validate reports differ between runs");
    assert_eq!(out1.stdout, out2.stdout);
}
