use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use opradius_ffi::*;

fn matrix(n: usize, data: &[f64]) -> *mut OprMatrix {
    let mut m = ptr::null_mut();
    let status = unsafe { opr_matrix_new(n, data.as_ptr(), data.len(), &mut m) };
    assert_eq!(status, OprStatus::Ok);
    m
}

fn norm(selector: &str) -> *mut OprNorm {
    let s = CString::new(selector).unwrap();
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { opr_norm_parse(s.as_ptr(), &mut n) }, OprStatus::Ok);
    n
}

fn last_error() -> Option<String> {
    let p = opr_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn jordan() -> (*mut OprMatrix, *mut OprMatrix) {
    (matrix(2, &[0., 0., 1., 0., 0., 0., 0., 0.]), matrix(2, &[0., 0., 0., 0., 1., 0., 0., 0.]))
}

#[test]
fn pair_radius_of_jordan_block() {
    let (b, c) = jordan();
    let hs = norm("hs");
    let op = norm("op");
    let mut r = OprRadius::default();
    unsafe {
        assert_eq!(opr_w_ne(b, c, hs, ptr::null(), &mut r), OprStatus::Ok);
        assert!((r.value - 1.0).abs() < 1e-9);
        assert_eq!(opr_w_ne_alpha_beta(b, c, hs, ptr::null(), &mut r), OprStatus::Ok);
        assert!((r.value - 1.0).abs() < 1e-9);
        assert_eq!(opr_w2e_reduced(b, c, ptr::null(), &mut r), OprStatus::Ok);
        assert!((r.value - 1.0).abs() < 1e-9);
        assert_eq!(opr_w_n(b, op, ptr::null(), &mut r), OprStatus::Ok);
        assert!((r.value - 0.5).abs() < 1e-9);
        let mut v = 0.0;
        assert_eq!(opr_w2_closed_form(b, &mut v), OprStatus::Ok);
        assert!((v - 0.5_f64.sqrt()).abs() < 1e-12);
        assert_eq!(opr_norm_evaluate(op, b, &mut v), OprStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(opr_vector_oracle(b, c, 2000, 5, 50, &mut v), OprStatus::Ok);
        assert!((v - 0.5_f64.sqrt()).abs() < 1e-6);
        assert!(last_error().is_none());
        opr_matrix_free(b);
        opr_matrix_free(c);
        opr_norm_free(hs);
        opr_norm_free(op);
    }
}

#[test]
fn options_round_trip_and_validation() {
    let mut o = OprOptions {
        theta_grid: 0,
        t_grid: 0,
        phi_grid: 0,
        refine_passes: 0,
        refine_tol: 0.0,
        escalation_rounds: 0,
    };
    unsafe {
        assert_eq!(opr_options_default(&mut o), OprStatus::Ok);
        assert_eq!(o.theta_grid, 512);
        let (b, c) = jordan();
        let op = norm("op");
        let mut r = OprRadius::default();
        o.theta_grid = 4;
        assert_eq!(opr_w_ne(b, c, op, &o, &mut r), OprStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("theta_grid"));
        opr_matrix_free(b);
        opr_matrix_free(c);
        opr_norm_free(op);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    let mut r = OprRadius::default();
    unsafe {
        assert_eq!(opr_matrix_new(2, ptr::null(), 0, &mut m), OprStatus::NullPointer);
        assert!(last_error().unwrap().contains("data"));
        assert_eq!(opr_matrix_new(2, [1.0; 6].as_ptr(), 6, &mut m), OprStatus::InvalidArgument);
        assert_eq!(opr_matrix_new(1, [f64::NAN, 0.0].as_ptr(), 2, &mut m), OprStatus::InvalidArgument);
        let bad = CString::new("{\"n\": 2").unwrap();
        assert_eq!(opr_matrix_from_json(bad.as_ptr(), &mut m), OprStatus::Parse);
        let sel = CString::new("schatten:0.5").unwrap();
        let mut n = ptr::null_mut();
        assert_eq!(opr_norm_parse(sel.as_ptr(), &mut n), OprStatus::InvalidArgument);
        assert!(n.is_null());
        assert_eq!(opr_w_n(ptr::null(), ptr::null(), ptr::null(), &mut r), OprStatus::NullPointer);

        let small = matrix(1, &[1.0, 0.0]);
        let (b, c) = jordan();
        let op = norm("op");
        assert_eq!(opr_w_ne(small, c, op, ptr::null(), &mut r), OprStatus::InvalidArgument);
        assert!(last_error().unwrap().contains("dimension mismatch"));
        assert_eq!(opr_w_ne(b, c, op, ptr::null(), &mut r), OprStatus::Ok);
        assert!(last_error().is_none());
        opr_matrix_free(small);
        opr_matrix_free(b);
        opr_matrix_free(c);
        opr_norm_free(op);
        opr_matrix_free(ptr::null_mut());
        opr_norm_free(ptr::null_mut());
        opr_string_free(ptr::null_mut());
    }
}

#[test]
fn json_and_entries_round_trip() {
    let data = [1.5, -2.0, 0.25, 3.0, -1.0, 0.0, 0.1, 0.2];
    let m = matrix(2, &data);
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(opr_matrix_to_json(m, &mut json), OprStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(opr_matrix_from_json(json, &mut back), OprStatus::Ok);
        opr_string_free(json);
        let mut dim = 0;
        assert_eq!(opr_matrix_dim(back, &mut dim), OprStatus::Ok);
        assert_eq!(dim, 2);
        let mut out = [0.0; 8];
        assert_eq!(opr_matrix_entries(back, out.as_mut_ptr(), 7), OprStatus::InvalidArgument);
        assert_eq!(opr_matrix_entries(back, out.as_mut_ptr(), out.len()), OprStatus::Ok);
        assert_eq!(out, data);
        opr_matrix_free(m);
        opr_matrix_free(back);
    }
}

#[test]
fn sampling_and_suite() {
    let family = CString::new("nilpotent-pairs:2").unwrap();
    let (mut b, mut c) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(opr_sample(family.as_ptr(), 9, &mut b, &mut c), OprStatus::Ok);
        let mut single = ptr::null_mut();
        assert_eq!(opr_sample(family.as_ptr(), 9, &mut single, ptr::null_mut()), OprStatus::Ok);
        let mut dim = 0;
        assert_eq!(opr_matrix_dim(single, &mut dim), OprStatus::Ok);
        assert_eq!(dim, 2);

        let norms = [norm("op") as *const OprNorm, norm("hs") as *const OprNorm];
        let mut json = ptr::null_mut();
        assert_eq!(
            opr_run_suite_json(b, c, norms.as_ptr(), norms.len(), ptr::null(), &mut json),
            OprStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        opr_string_free(json);
        let verdicts: serde_json::Value = serde_json::from_str(&text).unwrap();
        let verdicts = verdicts.as_array().unwrap();
        assert_eq!(verdicts.len() % 2, 0);
        assert!(verdicts.iter().all(|v| v["status"] != "violation" && v["status"] != "error"));
        assert!(verdicts.iter().any(|v| v["check"] == "thm24.upper" && v["status"] == "sharp"));

        let unknown = CString::new("nope").unwrap();
        assert_eq!(opr_sample(unknown.as_ptr(), 1, &mut b, ptr::null_mut()), OprStatus::InvalidArgument);
        opr_matrix_free(b);
        opr_matrix_free(c);
        opr_matrix_free(single);
        for n in norms {
            opr_norm_free(n as *mut OprNorm);
        }
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header_and_static_library() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    assert!(lib_dir.join("libopradius_ffi.a").exists(), "static library missing in {}", lib_dir.display());
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests").join("smoke.c"))
        .arg(lib_dir.join("libopradius_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1.000000000000");
}
