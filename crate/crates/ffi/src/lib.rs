//! C interface to the decision engine.
//!
//! A session holds a parsed `.deco` program. Every call returns a
//! [`DecologStatus`]; strings handed out must be released with
//! [`decolog_string_free`], sessions with [`decolog_session_free`]. The text
//! of the last error on the calling thread is available from
//! [`decolog_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fmt::Write as _;
use std::ptr;

use decolog::logic::exc::normalize_exc;
use decolog::logic::excore::normalize_core;
use decolog::logic::states::normalize_state;
use decolog::logic::{countermodel, reduce_to_pure, verdict, Emptiness, Verdict};
use decolog::translate::translate;
use decolog::{enumerate_models, Error, FiniteModel, Logic, ModelBounds, Program};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DecologStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Type = 4,
    WrongLogic = 5,
    NoCanonicalForm = 6,
    Model = 7,
    Bounds = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DecologVerdict {
    Equal = 0,
    NotEqual = 1,
    Inconsistent = 2,
    EmptyDomain = 3,
}

impl From<Verdict> for DecologVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Equal => DecologVerdict::Equal,
            Verdict::NotEqual => DecologVerdict::NotEqual,
            Verdict::Inconsistent => DecologVerdict::Inconsistent,
            Verdict::EmptyDom => DecologVerdict::EmptyDomain,
        }
    }
}

/// A parsed program and the models its checks are decided in.
pub struct DecologSession {
    program: Program,
    models: Vec<FiniteModel>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DecologStatus {
    match e {
        Error::Syntax { .. } | Error::Unknown(_) | Error::Signature(_) => DecologStatus::Syntax,
        Error::TypeMismatch(_) | Error::IllTyped(_) => DecologStatus::Type,
        Error::IllegalAtom { .. } | Error::WeakEquation(_) | Error::FamilyMismatch { .. } => DecologStatus::WrongLogic,
        Error::NoCanonicalForm(_) => DecologStatus::NoCanonicalForm,
        Error::Model(_) | Error::MissingInterpretation(_) | Error::MissingWitness(_) => DecologStatus::Model,
        Error::Bounds(_) | Error::UniverseTooLarge { .. } | Error::OutsideUniverse(_) => DecologStatus::Bounds,
        Error::Io(_) => DecologStatus::Internal,
    }
}

fn fail(e: Error) -> DecologStatus {
    set_error(&e.to_string());
    status_of(&e)
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, DecologStatus> {
    if s.is_null() {
        set_error("null argument");
        return Err(DecologStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        DecologStatus::InvalidUtf8
    })
}

/// # Safety
/// `out` is null or writable.
unsafe fn hand_out(text: String, out: *mut *mut c_char) -> DecologStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DecologStatus::NullArgument;
    }
    *out = CString::new(text).unwrap_or_default().into_raw();
    DecologStatus::Ok
}

fn session_models(program: &Program, carrier_max: usize) -> decolog::Result<Vec<FiniteModel>> {
    match &program.model {
        Some(m) => Ok(vec![m.clone()]),
        None => Ok(enumerate_models(&program.signature, &ModelBounds::up_to(carrier_max))?.collect()),
    }
}

/// Parses `source` into a new session. Checks are decided in the program's
/// model block, or in every model with carriers up to `carrier_max`.
///
/// # Safety
/// `source` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn decolog_session_new(
    source: *const c_char,
    carrier_max: usize,
    out: *mut *mut DecologSession,
) -> DecologStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DecologStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let src = match read_str(source) {
        Ok(s) => s,
        Err(s) => return s,
    };
    let built = Program::parse(src).and_then(|program| {
        let models = session_models(&program, carrier_max)?;
        Ok(DecologSession { program, models })
    });
    match built {
        Ok(s) => {
            *out = Box::into_raw(Box::new(s));
            DecologStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `session` is null or was returned by [`decolog_session_new`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn decolog_session_free(session: *mut DecologSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of `check` lines in the session's program.
///
/// # Safety
/// `session` is null or a live session.
#[no_mangle]
pub unsafe extern "C" fn decolog_session_check_count(session: *const DecologSession) -> usize {
    session.as_ref().map(|s| s.program.checks.len()).unwrap_or(0)
}

/// Decides `equation` (in the session's names) and writes the verdict and a
/// report of `pure-eq:` lines, plus a countermodel line when one exists.
///
/// # Safety
/// `session` is a live session, `equation` a NUL-terminated string,
/// `verdict_out` and `report_out` writable.
#[no_mangle]
pub unsafe extern "C" fn decolog_check(
    session: *const DecologSession,
    equation: *const c_char,
    verdict_out: *mut DecologVerdict,
    report_out: *mut *mut c_char,
) -> DecologStatus {
    let Some(s) = session.as_ref() else {
        set_error("null session");
        return DecologStatus::NullArgument;
    };
    if verdict_out.is_null() {
        set_error("null output pointer");
        return DecologStatus::NullArgument;
    }
    let src = match read_str(equation) {
        Ok(x) => x,
        Err(st) => return st,
    };
    let result = (|| {
        let e = s.program.equation(src)?;
        let sig = &s.program.signature;
        let em = s.program.model.as_ref().map(Emptiness::from_model).unwrap_or_default();
        let red = reduce_to_pure(&e, sig.logic(), sig, &em)?;
        let v = verdict(&red, &s.models)?;
        let mut report = String::new();
        for p in red.pure_eqs() {
            let _ = writeln!(report, "pure-eq: {p}");
        }
        if v == Verdict::NotEqual {
            if let Some(m) = countermodel(&red, &s.models)? {
                let _ = writeln!(report, "countermodel: {m}");
            }
        }
        Ok((v, report))
    })();
    match result {
        Ok((v, report)) => {
            *verdict_out = v.into();
            hand_out(report, report_out)
        }
        Err(e) => fail(e),
    }
}

/// Writes the canonical form of `term` in the session's logic.
///
/// # Safety
/// `session` is a live session, `term` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn decolog_normalize(
    session: *const DecologSession,
    term: *const c_char,
    out: *mut *mut c_char,
) -> DecologStatus {
    let Some(s) = session.as_ref() else {
        set_error("null session");
        return DecologStatus::NullArgument;
    };
    let src = match read_str(term) {
        Ok(x) => x,
        Err(st) => return st,
    };
    let result = s.program.term(src).and_then(|t| match s.program.signature.logic() {
        Logic::Eqn => Ok(format!("pure {t}")),
        Logic::Exc => Ok(normalize_exc(&t)?.to_string()),
        Logic::ExCore => Ok(normalize_core(&t)?.to_string()),
        Logic::States => Ok(normalize_state(&t)?.to_string()),
    });
    match result {
        Ok(text) => hand_out(text, out),
        Err(e) => fail(e),
    }
}

/// Writes the core-language image of an exceptions `term`.
///
/// # Safety
/// `session` is a live session, `term` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn decolog_translate(
    session: *const DecologSession,
    term: *const c_char,
    out: *mut *mut c_char,
) -> DecologStatus {
    let Some(s) = session.as_ref() else {
        set_error("null session");
        return DecologStatus::NullArgument;
    };
    let src = match read_str(term) {
        Ok(x) => x,
        Err(st) => return st,
    };
    if s.program.signature.logic() != Logic::Exc {
        return fail(Error::FamilyMismatch {
            expected: Logic::Exc,
            found: s.program.signature.logic(),
        });
    }
    match s.program.term(src).and_then(|t| translate(&t)) {
        Ok(t) => hand_out(t.to_string(), out),
        Err(e) => fail(e),
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn decolog_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn decolog_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(s: *mut c_char) -> String {
        let out = CStr::from_ptr(s).to_str().unwrap().to_string();
        decolog_string_free(s);
        out
    }

    #[test]
    fn bad_source_sets_status_and_message() {
        unsafe {
            let mut s = ptr::null_mut();
            let st = decolog_session_new(c("signature x { type N }").as_ptr(), 2, &mut s);
            assert_eq!(st, DecologStatus::Syntax);
            assert!(s.is_null());
            let msg = CStr::from_ptr(decolog_last_error()).to_str().unwrap();
            assert!(msg.starts_with("syntax error"), "{msg}");
            assert_eq!(decolog_session_new(ptr::null(), 2, &mut s), DecologStatus::NullArgument);
        }
    }

    #[test]
    fn null_session_is_rejected() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                decolog_normalize(ptr::null(), c("s").as_ptr(), &mut out),
                DecologStatus::NullArgument
            );
            decolog_session_free(ptr::null_mut());
            decolog_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn verdict_maps_all_variants() {
        assert_eq!(DecologVerdict::from(Verdict::EmptyDom), DecologVerdict::EmptyDomain);
        assert_eq!(DecologVerdict::from(Verdict::Inconsistent) as i32, 2);
    }

    #[test]
    fn wrong_logic_for_translation() {
        unsafe {
            let src = c("signature t { logic states; type N; value V = N; op s : N -> N; const z : N; }");
            let mut s = ptr::null_mut();
            assert_eq!(decolog_session_new(src.as_ptr(), 2, &mut s), DecologStatus::Ok);
            let mut out = ptr::null_mut();
            assert_eq!(
                decolog_translate(s, c("s").as_ptr(), &mut out),
                DecologStatus::WrongLogic
            );
            assert_eq!(
                take({
                    assert_eq!(
                        decolog_normalize(s, c("lookup . update").as_ptr(), &mut out),
                        DecologStatus::Ok
                    );
                    out
                }),
                "modifier lookup . update"
            );
            decolog_session_free(s);
        }
    }
}
