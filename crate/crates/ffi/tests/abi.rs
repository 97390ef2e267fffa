use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use decolog_ffi::*;

const NAT: &str = "signature nat { logic exc; type N; param P = N;
  op s : N -> N pure; op p : N -> N pure; const two : N; const three : N;
  model { N = {0, 1, 2, 3}; s(x) = (x + 1) % 4; p(x) = (x + 3) % 4; two = 2; three = 3; } }
check try (s . throw[N] . three) catch (p) == two;";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    decolog_string_free(s);
    out
}

#[test]
fn session_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(decolog_session_new(c(NAT).as_ptr(), 3, &mut s), DecologStatus::Ok);
        assert_eq!(decolog_session_check_count(s), 1);

        let mut v = DecologVerdict::NotEqual;
        let mut report = ptr::null_mut();
        let eq = c("try (s . throw[N] . three) catch (p) == two");
        assert_eq!(decolog_check(s, eq.as_ptr(), &mut v, &mut report), DecologStatus::Ok);
        assert_eq!(v, DecologVerdict::Equal);
        assert_eq!(take(report), "pure-eq: p . three == two\n");

        let eq = c("throw[N] . three == two");
        assert_eq!(decolog_check(s, eq.as_ptr(), &mut v, &mut report), DecologStatus::Ok);
        assert_eq!(v, DecologVerdict::Inconsistent);
        drop(take(report));

        let mut out = ptr::null_mut();
        let t = c("try (s . throw[N] . three) catch (p)");
        assert_eq!(decolog_normalize(s, t.as_ptr(), &mut out), DecologStatus::Ok);
        assert_eq!(take(out), "pure p . three");
        assert_eq!(decolog_translate(s, t.as_ptr(), &mut out), DecologStatus::Ok);
        assert_eq!(take(out), "TRY(s . copa[N] . tag . three, CATCH(p))");

        assert_eq!(
            decolog_normalize(s, c("s . tag").as_ptr(), &mut out),
            DecologStatus::WrongLogic
        );
        assert_eq!(
            decolog_normalize(s, c("s . zz").as_ptr(), &mut out),
            DecologStatus::Syntax
        );
        let bad = [0xffu8, 0];
        assert_eq!(
            decolog_normalize(s, bad.as_ptr().cast(), &mut out),
            DecologStatus::InvalidUtf8
        );
        decolog_session_free(s);
    }
}

#[test]
fn header_is_current_and_usable_from_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/decolog.h")).unwrap();
    for name in [
        "decolog_session_new",
        "decolog_check",
        "decolog_string_free",
        "DECOLOG_STATUS_SYNTAX",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let lib_dir = dir.join("../../target/debug");
    let lib = lib_dir.join("libdecolog_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping C build: no static library or compiler");
        return;
    }
    let exe = std::env::temp_dir().join("decolog-ffi-smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "0 pure-eq: p . three == two\nTRY(s . copa[N] . tag . three, CATCH(p))\n"
    );
}
