use std::path::{Path, PathBuf};
use std::process::Command;

use opradius::cli::{run, EXIT_OK, EXIT_USAGE};
use opradius::Matrix;
use serde_json::Value;
use tempfile::TempDir;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("opradius").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, m: &Matrix) -> PathBuf {
    let p = dir.path().join(name);
    m.write_json(&p).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn jordan_files(dir: &TempDir) -> (PathBuf, PathBuf) {
    let j = Matrix::jordan2();
    (write(dir, "j.json", &j), write(dir, "js.json", &j.adjoint()))
}

#[test]
fn radius_of_pair_reports_all_three_values() {
    let dir = TempDir::new().unwrap();
    let (j, js) = jordan_files(&dir);
    let (code, out, _) = invoke(&["radius", "--pair", s(&j), s(&js), "--norm", "hs", "--norm", "op"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["norm"], "hs");
    assert_eq!(lines[0]["w_ne"]["value"].as_f64().unwrap(), 1.0);
    assert_eq!(lines[1]["norm"], "op");
    assert_eq!(lines[1]["w_n_b"]["value"].as_f64().unwrap(), 0.5);
    assert!((lines[1]["w_ne"]["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-11);
    for key in ["theta", "t", "phi"] {
        assert!(lines[1]["w_ne"]["argmax"][key].is_number());
    }
}

#[test]
fn radius_text_output_for_single_matrix() {
    let dir = TempDir::new().unwrap();
    let (j, _) = jordan_files(&dir);
    let (code, out, _) = invoke(&["radius", "--single", s(&j), "--out", "text"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("op: w_N(T) = 0.5 at theta"), "{out}");
}

#[test]
fn verify_emits_one_line_per_check_and_norm() {
    let dir = TempDir::new().unwrap();
    let (j, js) = jordan_files(&dir);
    let (code, out, _) = invoke(&["verify", "--pair", s(&j), s(&js), "--norm", "op", "--norm", "hs"]);
    assert_eq!(code, EXIT_OK);
    let verdicts: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(verdicts.len(), 2 * opradius::inequalities::registry().len());
    let find = |id: &str, norm: &str| {
        verdicts
            .iter()
            .find(|v| v["check"] == id && v["norm"] == norm)
            .unwrap_or_else(|| panic!("{id} {norm}"))
    };
    assert_eq!(find("thm24.upper", "op")["status"], "sharp");
    assert_eq!(find("thm31", "hs")["status"], "sharp");
    assert_eq!(find("thm31", "op")["status"], "skipped");
    assert!(verdicts.iter().all(|v| v["status"] != "violation"));
}

#[test]
fn verify_single_uses_zero_second_operand() {
    let dir = TempDir::new().unwrap();
    let (j, _) = jordan_files(&dir);
    let (code, out, _) = invoke(&["verify", "--single", s(&j), "--out", "text"]);
    assert_eq!(code, EXIT_OK);
    let line = out.lines().find(|l| l.starts_with("eq12.lower ")).unwrap();
    assert!(line.contains("sharp") && line.contains("lhs=0.25") && line.contains("rhs=0.25"), "{line}");
}

#[test]
fn search_finds_equality_for_nilpotent_pairs() {
    let (code, out, _) = invoke(&[
        "search", "--check", "thm24.upper", "--family", "nilpotent-pairs:2", "--samples", "8", "--seed", "3",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["check_id"], "thm24.upper");
    assert!(v["min_relative_slack"].as_f64().unwrap().abs() <= 1e-9);
    assert_eq!(v["b"]["n"], 2);
}

#[test]
fn oracle_agrees_with_pair_radius() {
    let dir = TempDir::new().unwrap();
    let (j, js) = jordan_files(&dir);
    let (code, out, _) = invoke(&["oracle", "--pair", s(&j), s(&js), "--samples", "500", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert!(v["difference"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn gen_round_trip_is_bit_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(invoke(&["gen", "--family", "ginibre:4", "--seed", "11", s(&a)]).0, EXIT_OK);
    assert_eq!(invoke(&["gen", "--family", "ginibre:4", "--seed", "11", s(&b)]).0, EXIT_OK);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let m = Matrix::read_json(&a).unwrap();
    let expected = opradius::sampling::sample_matrix(&"ginibre:4:11".parse().unwrap()).unwrap();
    assert_eq!(m, expected);
    assert_eq!(m.to_json_string() + "\n", text);
}

#[test]
fn gen_pair_family_writes_adjoint() {
    let dir = TempDir::new().unwrap();
    let (t, ts) = (dir.path().join("t.json"), dir.path().join("ts.json"));
    assert_eq!(invoke(&["gen", "--family", "nilpotent-pairs", "--seed", "5", s(&t), s(&ts)]).0, EXIT_OK);
    let t = Matrix::read_json(&t).unwrap();
    assert_eq!(t.dim(), 3);
    assert_eq!(t.adjoint(), Matrix::read_json(&ts).unwrap());
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let (j, _) = jordan_files(&dir);
    let missing = dir.path().join("missing.json");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"data\": []}").unwrap();
    let three = write(&dir, "i3.json", &Matrix::identity(3).unwrap());
    let cases: Vec<Vec<&str>> = vec![
        vec!["radius"],
        vec!["radius", "--single", s(&missing)],
        vec!["radius", "--single", s(&bad)],
        vec!["radius", "--single", s(&j), "--norm", "schatten:0"],
        vec!["radius", "--pair", s(&j), s(&three)],
        vec!["radius", "--single", s(&j), "--theta-grid", "2"],
        vec!["gen", "--family", "nilpotent-pairs", "--seed", "1", s(&missing)],
        vec!["gen", "--family", "ginibre"],
        vec!["search", "--check", "nope", "--family", "ginibre", "--seed", "1"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let (code, _, err) = invoke(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (_, _, err) = invoke(&["radius", "--single", s(&missing)]);
    assert!(err.contains("missing.json"), "{err}");
}

#[test]
fn binary_runs_and_sets_exit_code() {
    let exe = env!("CARGO_BIN_EXE_opradius");
    let dir = TempDir::new().unwrap();
    let (j, js) = jordan_files(&dir);
    let out = Command::new(exe)
        .args(["radius", "--pair", s(&j), s(&js), "--norm", "hs", "--out", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("w_(N,e)(B, C) = 1 at"), "{text}");

    let out = Command::new(exe).args(["radius", "--norm", "op"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));

    let out = Command::new(exe).arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("verify"));
}
