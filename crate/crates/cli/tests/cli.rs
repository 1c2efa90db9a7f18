use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

#[test]
fn bell_revised_csv_in_thirds() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsv(&[
        "design",
        "--state",
        "bell",
        "--revise",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let third = "0.333333333333";
    let rows = [
        [1, 0, 0, 1],
        [0; 4],
        [0; 4],
        [0; 4],
        [0, 1, 1, 0],
        [0; 4],
        [0; 4],
        [0; 4],
        [1, 0, 0, 1],
    ];
    let labels = ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"];
    let mut want = String::from("setting,++,+-,-+,--\n");
    for (label, row) in labels.iter().zip(rows) {
        let cells: Vec<&str> = row
            .iter()
            .map(|&k| if k == 1 { third } else { "0" })
            .collect();
        want += &format!("{label},{}\n", cells.join(","));
    }
    assert_eq!(csv, want);
}

fn simulate_spectrum(state: &str, extra: &[&str]) -> Vec<f64> {
    let mut args = vec![
        "simulate", "--state", state, "--copies", "3", "--trials", "200",
    ];
    args.extend_from_slice(extra);
    let out = qsv(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    numbers(&json(&out)["spectrum"])
}

fn roundtrip(state: &str, design_args: &[&str], dir: &Path) -> (Vec<f64>, Vec<f64>) {
    let mut args = vec!["design", "--state", state, "--out", dir.to_str().unwrap()];
    args.extend_from_slice(design_args);
    qsv(&args);
    let file = dir.join("protocol.json");
    let imported = simulate_spectrum(state, &["--protocol", file.to_str().unwrap()]);
    let fresh = simulate_spectrum(state, design_args);
    (imported, fresh)
}

#[test]
fn design_then_simulate_preserves_spectrum() {
    let cases: [(&str, &[&str]); 5] = [
        ("bell", &["--revise"]),
        ("ghz:3", &["--revise"]),
        ("stab:+XZZ,+ZXI,+ZIX", &[]),
        ("w:3", &["--weights", "0,0,1", "--mode", "locc"]),
        ("w:3", &["--revise"]),
    ];
    for (state, args) in cases {
        let dir = tempfile::tempdir().unwrap();
        let (imported, fresh) = roundtrip(state, args, dir.path());
        assert_close(&imported, &fresh, 1e-9);
        assert!((imported[0] - 1.0).abs() < 1e-9);

        let design: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("design.json")).unwrap())
                .unwrap();
        if design["feasible"] == Value::Bool(true) {
            assert_close(&imported, &numbers(&design["spectrum"]), 1e-9);
        }
    }
}

#[test]
fn design_examples() {
    let ghz = json(&qsv(&[
        "design",
        "--state",
        "ghz:3",
        "--weights",
        "1/3,1/3,1/3",
        "--revise",
    ]));
    assert!((ghz["nu"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert_eq!(ghz["protocol"]["kind"], "homogeneous");

    let out = qsv(&["check", "--state", "w:3", "--weights", "1/3,1/3,1/3"]);
    assert_eq!(out.status.code(), Some(1));
    let check = json(&out);
    assert_eq!(check["local"], Value::Bool(false));
    assert!((check["completeness"].as_f64().unwrap() - 1.407).abs() < 0.01);

    let out = qsv(&[
        "design",
        "--state",
        "w:3",
        "--weights",
        "0,0,1",
        "--mode",
        "locc",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let locc = json(&out);
    assert_eq!(locc["feasible"], Value::Bool(true));
    let s = locc["verdict"]["completeness"].as_f64().unwrap();
    assert!((s - 7.0 / 6.0).abs() < 1e-11);
    assert_eq!(locc["protocol"]["kind"], "adaptive");
}

#[test]
fn w3_nonadaptive_design_is_infeasible_with_fallback() {
    let out = qsv(&["design", "--state", "w:3", "--revise"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["feasible"], Value::Bool(false));
    assert!(report["protocol"].is_null());
    assert!((report["fallback_protocol"]["nu"].as_f64().unwrap() - 3.0 / 13.0).abs() < 1e-11);
}

#[test]
fn revise_reports_identity_weight() {
    let out = json(&qsv(&["revise", "--state", "bell"]));
    assert!((out["a"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((out["nu"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-11);
    assert!((out["revised_nu"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-11);
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["design", "--state", "ghz:x"],
        vec!["design", "--state", "bell", "--weights", "1/2,1/2"],
        vec!["design", "--state", "bell", "--weights", "1/0,0,1"],
        vec!["check", "--state", "bell", "--mode", "adaptive"],
        vec!["simulate", "--state", "bell", "--epsilon", "2"],
    ] {
        let out = qsv(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("error JSON");
        assert!(err["error"].is_string() && err["message"].is_string());
    }
}

#[test]
fn simulation_is_seeded() {
    let args = [
        "simulate",
        "--state",
        "ghz:3",
        "--revise",
        "--epsilon",
        "0.2",
        "--copies",
        "4",
        "--trials",
        "5000",
        "--seed",
        "9",
    ];
    let a = json(&qsv(&args));
    let b = json(&qsv(&args));
    assert_eq!(a, b);
    assert_eq!(a["copies"], 4);
    let single = a["single_copy_pass"].as_f64().unwrap();
    assert!((single - (1.0 - 0.2 * 0.6)).abs() < 1e-11);
}

#[test]
fn estimate_tracks_source_fidelity() {
    let out = json(&qsv(&[
        "estimate",
        "--state",
        "bell",
        "--revise",
        "--epsilon",
        "0.1",
        "--trials",
        "50000",
        "--seed",
        "4",
    ]));
    let f = out["fidelity"].as_f64().unwrap();
    let sd = out["std_dev"].as_f64().unwrap();
    assert!((f - 0.9).abs() <= 3.0 * sd, "{out}");
}

#[test]
fn export_json_has_labels() {
    let out = json(&qsv(&[
        "export", "--state", "bell", "--table", "target", "--format", "json",
    ]));
    assert_eq!(out["settings"][0], "XX");
    assert_eq!(out["outcomes"][3], "--");
    let v = out["values"][0][0].as_f64().unwrap();
    assert!((v - 10.0 / 36.0).abs() < 1e-11);
}

#[test]
fn witness_of_w3() {
    let out = json(&qsv(&["witness", "--state", "w:3"]));
    assert!((out["kappa"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-11);
    assert!((out["expectation"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-11);
}
