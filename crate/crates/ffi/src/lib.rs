//! C ABI over the `pochette` core.
//!
//! Every entry point returns a [`PchStatus`]. Results come back through out
//! pointers. Strings handed to the caller are owned by the caller and must be
//! released with [`pch_string_free`]. Diagrams are opaque handles released with
//! [`pch_diagram_free`]. After a non-`Ok` status, [`pch_last_error_message`]
//! describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pochette::diagram::{self, CheckedDiagram, HandleDiagram, PochetteDesignation};
use pochette::gluing::{natural_lift, synthesize_word, verify_word};
use pochette::slope::{Mod2Framing, SlopeFraction};
use pochette::surgery::{self, Mode, SurgeryError, SurgeryHypotheses};

/// Result codes. `Ok` is zero; every other value is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PchStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSlope = 4,
    InvalidDiagram = 5,
    HypothesesNotMet = 6,
    Internal = 7,
}

/// Surgery mode selector for [`pch_surgery_certificate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PchMode {
    Algebraic = 0,
    Diagram = 1,
}

/// A validated handle diagram.
pub struct PchDiagram(CheckedDiagram);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Fallible<T> = Result<T, (PchStatus, String)>;

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any error for [`pch_last_error_message`], and converts
/// panics into `Internal`.
fn guard(f: impl FnOnce() -> Fallible<()>) -> PchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PchStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            PchStatus::Internal
        }
    }
}

/// # Safety
/// `s` must be null or point to a nul-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Fallible<&'a str> {
    if s.is_null() {
        return Err((PchStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (PchStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write_out<T>(out: *mut T, v: T) -> Fallible<()> {
    if out.is_null() {
        return Err((PchStatus::NullPointer, "output pointer is null".to_string()));
    }
    out.write(v);
    Ok(())
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul in generated text").into_raw()
}

fn slope_eps(p: i64, q: i64, eps: i32) -> Fallible<(SlopeFraction, Mod2Framing)> {
    let bad = |e: pochette::slope::SlopeError| (PchStatus::InvalidSlope, e.to_string());
    Ok((SlopeFraction::new(p, q).map_err(bad)?, Mod2Framing::new(i64::from(eps)).map_err(bad)?))
}

/// # Safety
/// `d` must be null or a live handle from [`pch_diagram_from_json`].
unsafe fn diagram_ref<'a>(d: *const PchDiagram) -> Fallible<&'a CheckedDiagram> {
    d.as_ref()
        .map(|d| &d.0)
        .ok_or_else(|| (PchStatus::NullPointer, "diagram is null".to_string()))
}

/// Message for the last failure on this thread, or null after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn pch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a diagram from JSON.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_diagram_from_json(json: *const c_char, out: *mut *mut PchDiagram) -> PchStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let d = HandleDiagram::from_json(text).map_err(|e| (PchStatus::Parse, e.to_string()))?;
        let d = diagram::validate(d).map_err(|e| (PchStatus::InvalidDiagram, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(PchDiagram(d))))
    })
}

/// Releases a diagram. Null is ignored.
///
/// # Safety
/// `d` must be null or a handle from [`pch_diagram_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pch_diagram_free(d: *mut PchDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Homology of the closed manifold as JSON: `profile`, `profile_text`,
/// `euler_characteristic`, `homology_sphere`.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_diagram_homology_json(d: *const PchDiagram, out: *mut *mut c_char) -> PchStatus {
    guard(|| {
        let d = diagram_ref(d)?;
        let profile = diagram::homology_closed(d).map_err(|e| (PchStatus::InvalidDiagram, e.to_string()))?;
        let v = serde_json::json!({
            "profile": profile,
            "profile_text": profile.to_string(),
            "euler_characteristic": diagram::euler_characteristic(d),
            "homology_sphere": profile.is_homology_sphere(),
        });
        write_out(out, into_c(v.to_string()))
    })
}

/// Whether the diagram presents a homology 4-sphere.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_diagram_is_homology_sphere(d: *const PchDiagram, out: *mut bool) -> PchStatus {
    guard(|| {
        let d = diagram_ref(d)?;
        let v = diagram::is_homology_sphere(d).map_err(|e| (PchStatus::InvalidDiagram, e.to_string()))?;
        write_out(out, v)
    })
}

/// Move word realising slope `p/q` with mod-2 framing `eps`, e.g. `E2.E1^2`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_word(p: i64, q: i64, eps: i32, out: *mut *mut c_char) -> PchStatus {
    guard(|| {
        let (s, e) = slope_eps(p, q, eps)?;
        let w = synthesize_word(s, e).map_err(|e| (PchStatus::InvalidSlope, e.to_string()))?;
        write_out(out, into_c(w.to_string()))
    })
}

/// Whether the synthesized word for `p/q` composes to the expected action.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_word_verify(p: i64, q: i64, eps: i32, out: *mut bool) -> PchStatus {
    guard(|| {
        let (s, e) = slope_eps(p, q, eps)?;
        write_out(out, verify_word(s, e))
    })
}

/// The natural lift of `p/q` to a word in `m`, `l`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_natural_lift(p: i64, q: i64, out: *mut *mut c_char) -> PchStatus {
    guard(|| {
        let (s, _) = slope_eps(p, q, 0)?;
        write_out(out, into_c(natural_lift(s).to_string()))
    })
}

/// Surgery certificate as JSON for the pochette `"c,u"` in `d`.
///
/// `hypotheses_json` may be null for the defaults; otherwise it is an object
/// with `t2_zero`, `l_nullhomologous`, `h2_image_constrained`,
/// `simply_connected_result`. Unmet homological hypotheses still yield a
/// certificate, classified as such.
///
/// # Safety
/// `d` must be a live diagram handle; `pochette` a nul-terminated string;
/// `hypotheses_json` null or nul-terminated; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pch_surgery_certificate(
    d: *const PchDiagram,
    pochette: *const c_char,
    p: i64,
    q: i64,
    eps: i32,
    hypotheses_json: *const c_char,
    mode: PchMode,
    out: *mut *mut c_char,
) -> PchStatus {
    guard(|| {
        let d = diagram_ref(d)?;
        let text = read_str(pochette, "pochette")?;
        let poch = PochetteDesignation::parse(text)
            .ok_or_else(|| (PchStatus::Parse, format!("pochette expects `<1-handle>,<2-handle>`, got `{text}`")))?;
        let (s, e) = slope_eps(p, q, eps)?;
        let hyp = if hypotheses_json.is_null() {
            SurgeryHypotheses::default()
        } else {
            serde_json::from_str(read_str(hypotheses_json, "hypotheses_json")?)
                .map_err(|e| (PchStatus::Parse, format!("hypotheses: {e}")))?
        };
        let mode = match mode {
            PchMode::Algebraic => Mode::Algebraic,
            PchMode::Diagram => Mode::Diagram,
        };
        let cert = surgery::certify_diagram(d, &poch, s, e, &hyp, mode).map_err(|e| {
            let status = match e {
                SurgeryError::HypothesesNotMet(_) => PchStatus::HypothesesNotMet,
                _ => PchStatus::InvalidDiagram,
            };
            (status, e.to_string())
        })?;
        write_out(out, into_c(cert.to_json()))
    })
}
