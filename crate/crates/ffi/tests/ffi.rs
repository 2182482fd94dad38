use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pochette_ffi::*;

const S4: &str = include_str!("../../core/data/diagrams/s4_meridians.json");

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { pch_string_free(s) };
    out
}

fn last_error() -> String {
    let p = pch_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(json: &str) -> *mut PchDiagram {
    let c = CString::new(json).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pch_diagram_from_json(c.as_ptr(), &mut d) }, PchStatus::Ok);
    d
}

#[test]
fn words_and_lifts() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pch_word(3, 2, 0, &mut s) }, PchStatus::Ok);
    assert_eq!(take(s), "E2.E1^2");
    assert!(pch_last_error_message().is_null());

    let mut ok = false;
    assert_eq!(unsafe { pch_word_verify(-7, 3, 1, &mut ok) }, PchStatus::Ok);
    assert!(ok);

    assert_eq!(unsafe { pch_natural_lift(2, 3, &mut s) }, PchStatus::Ok);
    assert_eq!(take(s), "l m l^2 m");

    assert_eq!(unsafe { pch_word(2, 4, 0, &mut s) }, PchStatus::InvalidSlope);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { pch_word(1, 2, 2, &mut s) }, PchStatus::InvalidSlope);
    assert_eq!(unsafe { pch_word(1, 2, 0, ptr::null_mut()) }, PchStatus::NullPointer);
}

#[test]
fn diagram_homology() {
    let d = load(S4);
    let mut sphere = false;
    assert_eq!(unsafe { pch_diagram_is_homology_sphere(d, &mut sphere) }, PchStatus::Ok);
    assert!(sphere);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pch_diagram_homology_json(d, &mut s) }, PchStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["profile_text"], "(Z, 0, 0, 0, Z)");
    assert_eq!(v["euler_characteristic"], 2);
    unsafe { pch_diagram_free(d) };
    unsafe { pch_diagram_free(ptr::null_mut()) };
}

#[test]
fn diagram_errors() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pch_diagram_from_json(ptr::null(), &mut d) }, PchStatus::NullPointer);
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { pch_diagram_from_json(bad.as_ptr(), &mut d) }, PchStatus::Parse);
    let dangling = CString::new(r#"{"one_handles":[],"two_handles":[{"id":"k","framing":0,"linking":{"x":1}}],"n3":0,"n4":1}"#).unwrap();
    assert_eq!(unsafe { pch_diagram_from_json(dangling.as_ptr(), &mut d) }, PchStatus::InvalidDiagram);
    assert!(last_error().contains('x'));
    let utf8 = [0xffu8, 0];
    assert_eq!(unsafe { pch_diagram_from_json(utf8.as_ptr().cast(), &mut d) }, PchStatus::InvalidUtf8);
    assert!(d.is_null());
    let mut sphere = false;
    assert_eq!(unsafe { pch_diagram_is_homology_sphere(ptr::null(), &mut sphere) }, PchStatus::NullPointer);
}

#[test]
fn surgery_certificates() {
    let d = load(S4);
    let poch = CString::new("c1,u1").unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { pch_surgery_certificate(d, poch.as_ptr(), 5, 2, 1, ptr::null(), PchMode::Diagram, &mut s) };
    assert_eq!(st, PchStatus::Ok, "{}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["classification"]["TorsionH1"], 5);
    assert_eq!(v["diagram"]["agrees"], true);

    let hyp = CString::new(r#"{"t2_zero":true,"l_nullhomologous":true,"h2_image_constrained":true,"simply_connected_result":true}"#).unwrap();
    let st = unsafe { pch_surgery_certificate(d, poch.as_ptr(), 1, 3, 0, hyp.as_ptr(), PchMode::Algebraic, &mut s) };
    assert_eq!(st, PchStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["homeomorphism"], "Homeomorphic");

    let not_met = CString::new(r#"{"t2_zero":false,"l_nullhomologous":true,"h2_image_constrained":true,"simply_connected_result":null}"#).unwrap();
    let st = unsafe { pch_surgery_certificate(d, poch.as_ptr(), 1, 3, 0, not_met.as_ptr(), PchMode::Algebraic, &mut s) };
    assert_eq!(st, PchStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["classification"], "HypothesesNotMet");

    let wrong = CString::new("c1,k1").unwrap();
    let st = unsafe { pch_surgery_certificate(d, wrong.as_ptr(), 1, 3, 0, ptr::null(), PchMode::Algebraic, &mut s) };
    assert_eq!(st, PchStatus::InvalidDiagram);
    let junk = CString::new("c1").unwrap();
    let st = unsafe { pch_surgery_certificate(d, junk.as_ptr(), 1, 3, 0, ptr::null(), PchMode::Algebraic, &mut s) };
    assert_eq!(st, PchStatus::Parse);
    unsafe { pch_diagram_free(d) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(pch_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn errors_are_per_thread() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pch_word(0, 0, 0, &mut s) }, PchStatus::InvalidSlope);
    std::thread::spawn(|| assert!(pch_last_error_message().is_null())).join().unwrap();
    assert!(!pch_last_error_message().is_null());
}

/// Compiles the C example against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libpochette_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pochette_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("examples/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("a C compiler is needed for this test");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "word E2.E1^2\nsphere 1\nz5 1\nbad 4\n");
}
