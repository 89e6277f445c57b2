//! C ABI over the `bilateral` crate.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Strings returned by the
//! library are NUL-terminated, heap-allocated and released with
//! `bilateral_string_free`. Every fallible call returns a
//! [`BilateralStatus`]; the message for the most recent failure on the
//! calling thread is available from `bilateral_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bilateral::audit::{audit_suite, AuditConfig, ContextRegime};
use bilateral::calculus::{check_derivation, DerivationTree};
use bilateral::metacalculus::{check_meta_derivation, CoordinationMode};
use bilateral::search::{prove, SearchBudget};
use bilateral::semantics::{find_countermodel, ModelClass, Reading};
use bilateral::sexp::{parse_script, print_proof_script, Script};
use bilateral::syntax::{parse_sequent, Sequent};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilateralStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// No derivation or countermodel within the bound.
    NotFound = 4,
    /// A proof script was checked and rejected.
    Rejected = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilateralMode {
    Asymmetric = 0,
    Unified = 1,
    Independent = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilateralReading {
    Absence = 0,
    Unified = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilateralRegime {
    Empty = 0,
    Disjoint = 1,
    Arbitrary = 2,
}

/// A parsed sequent.
pub struct BilateralSequent(Sequent);

/// A derivation produced by `bilateral_prove`.
pub struct BilateralDerivation(DerivationTree);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: BilateralStatus, message: impl Into<String>) -> BilateralStatus {
    set_error(message);
    status
}

/// Runs `f`, turning a panic into `Panic` so that unwinding never crosses
/// the boundary.
fn guard(f: impl FnOnce() -> BilateralStatus) -> BilateralStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(BilateralStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BilateralStatus> {
    if s.is_null() {
        return Err(fail(BilateralStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(BilateralStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bilateral_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bilateral_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bilateral_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` (for example `"p; q |-+ p & q"`) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilateral_sequent_parse(text: *const c_char, out: *mut *mut BilateralSequent) -> BilateralStatus {
    guard(|| {
        if out.is_null() {
            return fail(BilateralStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_sequent(text) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(BilateralSequent(s)));
                BilateralStatus::Ok
            }
            Err(e) => fail(BilateralStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical text of a sequent.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bilateral_sequent_to_string(s: *const BilateralSequent) -> *mut c_char {
    match s.as_ref() {
        Some(s) => into_c_string(s.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be NULL or a handle from `bilateral_sequent_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bilateral_sequent_free(s: *mut BilateralSequent) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Searches for a derivation with at most `budget` rule applications per
/// branch. Returns `NotFound` (and sets `*out` to NULL) if there is none.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilateral_prove(
    s: *const BilateralSequent,
    budget: u32,
    out: *mut *mut BilateralDerivation,
) -> BilateralStatus {
    guard(|| {
        if out.is_null() {
            return fail(BilateralStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let Some(s) = s.as_ref() else {
            return fail(BilateralStatus::NullPointer, "null sequent");
        };
        match prove(&s.0, SearchBudget::new(budget as usize)) {
            Some(tree) => {
                *out = Box::into_raw(Box::new(BilateralDerivation(tree)));
                BilateralStatus::Ok
            }
            None => fail(BilateralStatus::NotFound, format!("no derivation of `{}` within budget {budget}", s.0)),
        }
    })
}

/// Number of rule applications on the longest branch.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bilateral_derivation_height(d: *const BilateralDerivation) -> usize {
    d.as_ref().map_or(0, |d| d.0.height())
}

/// The derivation as a proof script, accepted by `bilateral_check_script`.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bilateral_derivation_script(d: *const BilateralDerivation) -> *mut c_char {
    match d.as_ref() {
        Some(d) => into_c_string(print_proof_script(&d.0)),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `d` must be NULL or a handle from `bilateral_prove`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bilateral_derivation_free(d: *mut BilateralDerivation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

fn mode_of(m: BilateralMode) -> CoordinationMode {
    match m {
        BilateralMode::Asymmetric => CoordinationMode::AsymmetricDefault,
        BilateralMode::Unified => CoordinationMode::UnifiedConstructions,
        BilateralMode::Independent => CoordinationMode::IndependentConstructions,
    }
}

/// Checks a base or meta proof script. Returns `Ok` if accepted and
/// `Rejected` otherwise; the reason is in `bilateral_last_error`.
///
/// # Safety
/// `script` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bilateral_check_script(script: *const c_char, mode: BilateralMode, include_zeta: bool) -> BilateralStatus {
    guard(|| {
        let text = match read_str(script) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let verdict = match parse_script(text) {
            Ok(Script::Base(tree)) => check_derivation(&tree),
            Ok(Script::Meta(tree)) => check_meta_derivation(&tree, mode_of(mode), include_zeta),
            Err(e) => return fail(BilateralStatus::ParseError, e.to_string()),
        };
        if verdict.is_accepted() {
            BilateralStatus::Ok
        } else {
            fail(BilateralStatus::Rejected, verdict.to_string())
        }
    })
}

/// Looks for a countermodel with at most `max_worlds` worlds (1 to 4). On
/// success `*model_json` receives the model in the JSON model-file format.
///
/// # Safety
/// `s` must be a live handle and `model_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilateral_countermodel(
    s: *const BilateralSequent,
    max_worlds: u32,
    exclusive: bool,
    model_json: *mut *mut c_char,
) -> BilateralStatus {
    guard(|| {
        if model_json.is_null() {
            return fail(BilateralStatus::NullPointer, "null output pointer");
        }
        *model_json = ptr::null_mut();
        let Some(s) = s.as_ref() else {
            return fail(BilateralStatus::NullPointer, "null sequent");
        };
        if !(1..=4).contains(&max_worlds) {
            return fail(BilateralStatus::InvalidArgument, "max_worlds must be between 1 and 4");
        }
        let class = if exclusive { ModelClass::Exclusive } else { ModelClass::NonExclusive };
        match find_countermodel(&s.0, max_worlds as usize, &Default::default(), class) {
            Some((m, _)) => {
                *model_json = into_c_string(m.to_json());
                BilateralStatus::Ok
            }
            None => fail(BilateralStatus::NotFound, format!("no countermodel to `{}` with at most {max_worlds} worlds", s.0)),
        }
    })
}

/// Audits every rule over atoms {p, q} with the given bounds and writes the
/// JSON report to `*report_json`.
///
/// # Safety
/// `report_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilateral_audit_json(
    reading: BilateralReading,
    regime: BilateralRegime,
    mode: BilateralMode,
    max_worlds: u32,
    max_depth: u32,
    report_json: *mut *mut c_char,
) -> BilateralStatus {
    guard(|| {
        if report_json.is_null() {
            return fail(BilateralStatus::NullPointer, "null output pointer");
        }
        *report_json = ptr::null_mut();
        if !(1..=4).contains(&max_worlds) || max_depth > 3 {
            return fail(BilateralStatus::InvalidArgument, "max_worlds must be 1 to 4 and max_depth at most 3");
        }
        let cfg = AuditConfig {
            reading: match reading {
                BilateralReading::Absence => Reading::R1Absence,
                BilateralReading::Unified => Reading::R2Unified,
            },
            context_regime: match regime {
                BilateralRegime::Empty => ContextRegime::Empty,
                BilateralRegime::Disjoint => ContextRegime::Disjoint,
                BilateralRegime::Arbitrary => ContextRegime::Arbitrary,
            },
            mode: mode_of(mode),
            max_worlds: max_worlds as usize,
            max_formula_depth: max_depth as usize,
            ..AuditConfig::default()
        };
        *report_json = into_c_string(audit_suite(&[cfg]).to_json());
        BilateralStatus::Ok
    })
}
