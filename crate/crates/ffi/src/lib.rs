//! C ABI for the modsys library.
//!
//! Documents are opaque handles created by [`modsys_document_parse`] and
//! released with [`modsys_document_free`]. Every fallible function returns a
//! [`ModsysStatus`]; on failure a message is available from
//! [`modsys_last_error_message`] on the same thread. Strings handed out by
//! the library are NUL-terminated UTF-8 and must be released with
//! [`modsys_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modsys::algebra::{check_wellformed, signature_of, ModuleExpr};
use modsys::frontend::{SpecDocument, SpecError};
use modsys::semantics::{default_tau, expand, mt_models, op_models, ModelSet};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModsysStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArg = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The document text has a syntax error or an undefined or duplicate name.
    Parse = 3,
    /// The document or the requested system is ill-formed.
    Validation = 4,
    /// Evaluation failed, for example because an enumeration exceeds the ceiling.
    Semantic = 5,
    /// No system, module or instance has the requested name.
    NotFound = 6,
    /// The library panicked; the handle passed in must not be used again.
    Panic = 7,
}

/// A parsed document.
pub struct ModsysDocument {
    doc: SpecDocument,
}

struct Failure(ModsysStatus, String);

type Outcome<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).expect("interior NULs escaped");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Outcome<()>) -> ModsysStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModsysStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            ModsysStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ModsysStatus::NullArg, format!("{what} is null"))
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(ModsysStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` is null or a handle from [`modsys_document_parse`] not yet freed.
unsafe fn document<'a>(p: *const ModsysDocument) -> Outcome<&'a SpecDocument> {
    p.as_ref().map(|d| &d.doc).ok_or_else(|| null("document"))
}

fn spec_failure(e: SpecError) -> Failure {
    let status = match e {
        SpecError::Invalid { .. } => ModsysStatus::Validation,
        _ => ModsysStatus::Parse,
    };
    Failure(status, e.to_string())
}

fn semantic_failure(e: modsys::Error) -> Failure {
    let status = match e {
        modsys::Error::IllFormed(_) | modsys::Error::SymbolLeakage(_) => ModsysStatus::Validation,
        _ => ModsysStatus::Semantic,
    };
    Failure(status, e.to_string())
}

fn system(doc: &SpecDocument, name: &str) -> Outcome<ModuleExpr> {
    doc.resolve(name).ok_or_else(|| Failure(ModsysStatus::NotFound, format!("no system or module named `{name}`")))
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Failure(ModsysStatus::Semantic, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn lines(ms: &ModelSet) -> String {
    ms.lines().iter().map(|l| format!("{l}\n")).collect()
}

/// Parses a document. On success `*out` receives a new handle.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn modsys_document_parse(text: *const c_char, out: *mut *mut ModsysDocument) -> ModsysStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc = SpecDocument::parse(utf8(text, "text")?).map_err(spec_failure)?;
        *out = Box::into_raw(Box::new(ModsysDocument { doc }));
        Ok(())
    })
}

/// Releases a document. Null is ignored.
///
/// # Safety
/// `doc` is null or a handle from [`modsys_document_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modsys_document_free(doc: *mut ModsysDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// The models of a system or module, one canonical structure per line.
///
/// # Safety
/// `doc` is a live handle, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modsys_models(
    doc: *const ModsysDocument,
    name: *const c_char,
    out: *mut *mut c_char,
) -> ModsysStatus {
    guard(|| {
        let d = document(doc)?;
        let e = system(d, utf8(name, "name")?)?;
        put_string(out, lines(&mt_models(&e, &d.domain).map_err(semantic_failure)?))
    })
}

/// The operational models over the system's own symbols, one per line.
///
/// # Safety
/// As [`modsys_models`].
#[no_mangle]
pub unsafe extern "C" fn modsys_op_models(
    doc: *const ModsysDocument,
    name: *const c_char,
    out: *mut *mut c_char,
) -> ModsysStatus {
    guard(|| {
        let d = document(doc)?;
        let e = system(d, utf8(name, "name")?)?;
        let tau = default_tau(&e).map_err(semantic_failure)?;
        put_string(out, lines(&op_models(&e, &tau, &d.domain).map_err(semantic_failure)?))
    })
}

/// Checks well-formedness: `*well_formed` receives 1 or 0. When `report` is
/// not null it receives the signature, followed by one line per violation.
///
/// # Safety
/// `doc` is a live handle, `name` a NUL-terminated string, `well_formed`
/// writable, `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn modsys_check(
    doc: *const ModsysDocument,
    name: *const c_char,
    well_formed: *mut i32,
    report: *mut *mut c_char,
) -> ModsysStatus {
    guard(|| {
        let d = document(doc)?;
        let e = system(d, utf8(name, "name")?)?;
        if well_formed.is_null() {
            return Err(null("well_formed"));
        }
        let r = check_wellformed(&e);
        *well_formed = i32::from(r.ok());
        if !report.is_null() {
            let mut s = match signature_of(&e) {
                Ok(sig) => format!("{sig}\n"),
                Err(err) => format!("{err}\n"),
            };
            for v in &r.violations {
                s.push_str(&format!("{v}\n"));
            }
            put_string(report, s)?;
        }
        Ok(())
    })
}

/// The models of a system expanding one of the document's instances, one
/// per line; empty when none exists.
///
/// # Safety
/// `doc` is a live handle, `name` and `instance` NUL-terminated strings,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn modsys_expand(
    doc: *const ModsysDocument,
    name: *const c_char,
    instance: *const c_char,
    out: *mut *mut c_char,
) -> ModsysStatus {
    guard(|| {
        let d = document(doc)?;
        let e = system(d, utf8(name, "name")?)?;
        let inst = utf8(instance, "instance")?;
        if d.instance(inst).is_none() {
            return Err(Failure(ModsysStatus::NotFound, format!("no instance named `{inst}`")));
        }
        let sigma = signature_of(&e).map_err(semantic_failure)?.sigma;
        let structure = d.instance_structure(inst, &sigma).map_err(spec_failure)?;
        put_string(out, lines(&expand(&e, &structure).map_err(semantic_failure)?))
    })
}

/// Compares the model-theoretic and operational semantics: `*equal`
/// receives 1 when they agree and 0 otherwise.
///
/// # Safety
/// `doc` is a live handle, `name` a NUL-terminated string, `equal` writable.
#[no_mangle]
pub unsafe extern "C" fn modsys_equiv(
    doc: *const ModsysDocument,
    name: *const c_char,
    equal: *mut i32,
) -> ModsysStatus {
    guard(|| {
        let d = document(doc)?;
        let e = system(d, utf8(name, "name")?)?;
        if equal.is_null() {
            return Err(null("equal"));
        }
        let mt = mt_models(&e, &d.domain).map_err(semantic_failure)?;
        let tau = default_tau(&e).map_err(semantic_failure)?;
        let op = op_models(&e, &tau, &d.domain).map_err(semantic_failure)?;
        *equal = i32::from(mt == op);
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn modsys_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn modsys_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn modsys_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
