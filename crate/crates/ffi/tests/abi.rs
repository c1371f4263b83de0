use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use toda_ffi::*;

fn last_error() -> String {
    let p = toda_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn curve_handle_round_trip() {
    let t = [0.0, -7.0, 0.0, 1.0];
    let mut c: *mut TodaCurve = ptr::null_mut();
    unsafe {
        assert_eq!(toda_curve_new(t.as_ptr(), t.len(), &mut c), TodaStatus::Ok);
        let mut g = 0;
        assert_eq!(toda_curve_genus(c, &mut g), TodaStatus::Ok);
        assert_eq!(g, 2);
        let mut buf = [0.0; 4];
        let mut len = 0;
        assert_eq!(toda_curve_frequency_matrix(c, buf.as_mut_ptr(), 4, &mut len), TodaStatus::Ok);
        assert_eq!(len, 4);
        let mut acts = [0.0; 1];
        assert_eq!(toda_curve_actions(c, acts.as_mut_ptr(), 1, &mut len), TodaStatus::BufferTooSmall);
        assert_eq!(len, 2);
        assert!(last_error().contains("need 2"));
        toda_curve_free(c);
        toda_curve_free(ptr::null_mut());
    }
}

#[test]
fn invalid_inputs_report_errors() {
    let mut c: *mut TodaCurve = ptr::null_mut();
    unsafe {
        assert_eq!(toda_curve_new(ptr::null(), 3, &mut c), TodaStatus::NullPointer);
        assert!(c.is_null());
        let nonmonic = [1.0, 0.0, 2.0];
        assert_eq!(toda_curve_new(nonmonic.as_ptr(), 3, &mut c), TodaStatus::InvalidInput);
        assert!(!last_error().is_empty());
        toda_clear_error();
        assert!(toda_last_error_message().is_null());
        assert_eq!(toda_curve_genus(ptr::null(), &mut 0), TodaStatus::NullPointer);
        let mut e = 0.0;
        assert_ne!(toda_bs_energy(-1.0, 0, &mut e), TodaStatus::Ok);
    }
}

#[test]
fn phase_space_calls() {
    let (mut p, mut q) = ([0.4, -0.1, -0.3], [0.0, 0.5, -0.2]);
    let mut t0 = [0.0; 4];
    let mut t1 = [0.0; 4];
    let mut len = 0;
    unsafe {
        assert_eq!(toda_conserved_poly(p.as_ptr(), q.as_ptr(), 3, t0.as_mut_ptr(), 4, &mut len), TodaStatus::Ok);
        assert_eq!(len, 4);
        assert_eq!(t0[3], 1.0);
        assert_eq!(toda_evolve(p.as_mut_ptr(), q.as_mut_ptr(), 3, 2, 0.8, 1e-12), TodaStatus::Ok);
        toda_conserved_poly(p.as_ptr(), q.as_ptr(), 3, t1.as_mut_ptr(), 4, &mut len);
        assert_ne!(p, [0.4, -0.1, -0.3]);
        for (a, b) in t0.iter().zip(&t1) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(toda_evolve(p.as_mut_ptr(), q.as_mut_ptr(), 3, 3, 0.1, 1e-12), TodaStatus::InvalidInput);
    }
}

#[test]
fn spectrum_handle() {
    let mut s: *mut TodaSpectrum = ptr::null_mut();
    unsafe {
        assert_eq!(toda_spectrum_solve(1.0, 3, &mut s), TodaStatus::Ok);
        let mut n = 0;
        toda_spectrum_len(s, &mut n);
        assert_eq!(n, 3);
        let (mut e, mut t2) = (0.0, 0.0);
        assert_eq!(toda_spectrum_level(s, 1, &mut e, &mut t2), TodaStatus::Ok);
        assert!((e - 5.285125967179).abs() < 1e-9);
        let mut r = 0.0;
        assert_eq!(toda_spectrum_baxter_residual(s, 1, &mut r), TodaStatus::Ok);
        assert!(r < 1e-6);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(toda_spectrum_q(s, 0, 0.0, 0.0, &mut re, &mut im), TodaStatus::Ok);
        assert!((re - 1.0).abs() < 1e-10 && im.abs() < 1e-10);
        let one = [1.0];
        assert_eq!(toda_spectrum_matrix_element(s, 0, 0, one.as_ptr(), 1, &mut re, &mut im), TodaStatus::Ok);
        assert!((re - 1.0).abs() < 1e-10);
        assert_eq!(toda_spectrum_matrix_element(s, 0, 2, one.as_ptr(), 1, &mut re, &mut im), TodaStatus::Ok);
        assert!(re.abs() < 1e-10);
        assert_eq!(toda_spectrum_level(s, 3, &mut e, &mut t2), TodaStatus::OutOfRange);
        toda_spectrum_free(s);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(toda_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// Compile the C smoke test against the generated header and the static
/// library built alongside this test.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libtoda_ffi.a");
    if !lib.exists() {
        let st = Command::new(env!("CARGO")).args(["build", "-p", "toda-ffi", "--lib"]).status().unwrap();
        assert!(st.success());
    }
    let lib = if lib.exists() { lib } else { manifest.join("../../target/debug/libtoda_ffi.a") };
    assert!(lib.exists(), "{}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok"));
}
