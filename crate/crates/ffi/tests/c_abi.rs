use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bilateral_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    bilateral_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(bilateral_last_error()).to_str().unwrap().to_string()
}

unsafe fn parse(text: &str) -> *mut BilateralSequent {
    let mut s = ptr::null_mut();
    assert_eq!(bilateral_sequent_parse(c(text).as_ptr(), &mut s), BilateralStatus::Ok);
    s
}

#[test]
fn parse_prove_and_recheck() {
    unsafe {
        let s = parse("p, q;   |-+ q & p");
        assert_eq!(take(bilateral_sequent_to_string(s)), "p, q; |-+ q & p");
        let mut d = ptr::null_mut();
        assert_eq!(bilateral_prove(s, 4, &mut d), BilateralStatus::Ok);
        assert_eq!(bilateral_derivation_height(d), 2);
        let script = take(bilateral_derivation_script(d));
        assert!(script.starts_with("(and-r+ \"p, q; |-+ q & p\""));
        assert_eq!(bilateral_check_script(c(&script).as_ptr(), BilateralMode::Asymmetric, false), BilateralStatus::Ok);
        bilateral_derivation_free(d);
        bilateral_sequent_free(s);
    }
}

#[test]
fn not_found_and_countermodel() {
    unsafe {
        let s = parse("; |-+ p | (p -> F)");
        let mut d = ptr::null_mut();
        assert_eq!(bilateral_prove(s, 6, &mut d), BilateralStatus::NotFound);
        assert!(d.is_null());
        assert!(last_error().contains("no derivation"));
        let mut json = ptr::null_mut();
        assert_eq!(bilateral_countermodel(s, 2, false, &mut json), BilateralStatus::Ok);
        let model = bilateral::semantics::KripkeModel::from_json(&take(json)).unwrap();
        let seq = bilateral::syntax::parse_sequent("; |-+ p | (p -> F)").unwrap();
        assert!(!bilateral::semantics::sequent_valid_in(&model, &seq));
        assert_eq!(bilateral_countermodel(s, 9, false, &mut json), BilateralStatus::InvalidArgument);
        bilateral_sequent_free(s);

        let valid = parse("p; |-+ p");
        assert_eq!(bilateral_countermodel(valid, 3, true, &mut json), BilateralStatus::NotFound);
        assert!(json.is_null());
        bilateral_sequent_free(valid);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(bilateral_sequent_parse(c("p -<").as_ptr(), &mut s), BilateralStatus::ParseError);
        assert!(s.is_null());
        assert!(last_error().contains('4'), "{}", last_error());
        assert_eq!(bilateral_sequent_parse(ptr::null(), &mut s), BilateralStatus::NullPointer);
        assert_eq!(bilateral_sequent_parse(c("p |-+ p").as_ptr(), ptr::null_mut()), BilateralStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(bilateral_sequent_parse(bad.as_ptr().cast(), &mut s), BilateralStatus::InvalidUtf8);
        let mut d = ptr::null_mut();
        assert_eq!(bilateral_prove(ptr::null(), 3, &mut d), BilateralStatus::NullPointer);
        bilateral_sequent_free(ptr::null_mut());
        bilateral_derivation_free(ptr::null_mut());
        bilateral_string_free(ptr::null_mut());
        assert!(bilateral_derivation_script(ptr::null()).is_null());
        assert_eq!(CStr::from_ptr(bilateral_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn meta_scripts_follow_the_mode() {
    let golden = r#"(s2a "-|" "; |-- F & p" (and-r-a[S>D] "=|" "; |-+ F & p" (bot-r- "-|" "; |-- F")))"#;
    unsafe {
        assert_eq!(bilateral_check_script(c(golden).as_ptr(), BilateralMode::Unified, false), BilateralStatus::Ok);
        assert_eq!(bilateral_check_script(c(golden).as_ptr(), BilateralMode::Independent, false), BilateralStatus::Rejected);
        assert!(last_error().contains("rule not in active set"), "{}", last_error());
        assert_eq!(bilateral_check_script(c(golden).as_ptr(), BilateralMode::Asymmetric, false), BilateralStatus::Rejected);
        assert_eq!(bilateral_check_script(c("(s2a").as_ptr(), BilateralMode::Unified, false), BilateralStatus::ParseError);
    }
}

#[test]
fn audit_report_over_the_boundary() {
    unsafe {
        let mut json = ptr::null_mut();
        let status = bilateral_audit_json(
            BilateralReading::Absence,
            BilateralRegime::Empty,
            BilateralMode::Asymmetric,
            2,
            1,
            &mut json,
        );
        assert_eq!(status, BilateralStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        let records = doc["records"].as_array().unwrap();
        let s2a = records.iter().find(|r| r["rule"] == "s2a").unwrap();
        assert_eq!(s2a["status"], "unsound");
        let ax = records.iter().find(|r| r["rule"] == "ax+").unwrap();
        assert_eq!(ax["status"], "sound_up_to_bound");
        let status =
            bilateral_audit_json(BilateralReading::Unified, BilateralRegime::Empty, BilateralMode::Asymmetric, 0, 1, &mut json);
        assert_eq!(status, BilateralStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bilateral.h")).unwrap();
    for name in [
        "bilateral_sequent_parse",
        "bilateral_sequent_free",
        "bilateral_prove",
        "bilateral_derivation_script",
        "bilateral_check_script",
        "bilateral_countermodel",
        "bilateral_audit_json",
        "bilateral_last_error",
        "BILATERAL_STATUS_NOT_FOUND = 4",
        "typedef struct BilateralSequent BilateralSequent",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compiles and runs a small C program against the header and static
/// library, when a C compiler and the archive are available.
#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let test_exe = std::env::current_exe().unwrap();
    let profile_dir = test_exe.parent().and_then(|p| p.parent()).unwrap();
    let archive = profile_dir.join("libbilateral_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or {} missing", archive.display());
        return;
    }
    let out_dir = std::env::temp_dir().join(format!("bilateral-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let source = out_dir.join("smoke.c");
    std::fs::write(
        &source,
        r#"#include <stdio.h>
#include <string.h>
#include "bilateral.h"

int main(void) {
    BilateralSequent *s = NULL;
    if (bilateral_sequent_parse("; |-+ p -> p", &s) != BILATERAL_STATUS_OK) return 1;
    BilateralDerivation *d = NULL;
    if (bilateral_prove(s, 3, &d) != BILATERAL_STATUS_OK) return 2;
    char *script = bilateral_derivation_script(d);
    printf("%s\n", script);
    int rc = bilateral_check_script(script, BILATERAL_MODE_ASYMMETRIC, false) == BILATERAL_STATUS_OK ? 0 : 3;
    bilateral_string_free(script);
    bilateral_derivation_free(d);
    bilateral_sequent_free(s);
    if (bilateral_sequent_parse("p -<", &s) != BILATERAL_STATUS_PARSE_ERROR) return 4;
    if (strlen(bilateral_last_error()) == 0) return 5;
    return rc;
}
"#,
    )
    .unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("(imp-r+ \"; |-+ p -> p\""));
    let _ = std::fs::remove_dir_all(&out_dir);
}
