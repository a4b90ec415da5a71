//! C ABI for `abmod`.
//!
//! Every function returns an [`AbmodStatus`]. On failure the message is kept
//! per thread and can be fetched with [`abmod_last_error_message`]. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`abmod_string_free`]; modules are released with [`abmod_module_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use abmod::algebra::{parse, Parsed};
use abmod::fresco::{module_from_element, module_from_presentation, principal_jh};
use abmod::io::{expansion_from_json, ElementJson, ModuleJson, TermJson};
use abmod::module::{bernstein_polynomial, is_geometric, saturate, AbModule};
use abmod::scalars::fmt_rational;
use abmod::theme::fundamental_data;
use abmod::xi::generate_theme;
use abmod::Error;
use serde_json::json;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbmodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Parse or format error in the input.
    InvalidInput = 3,
    /// The module is not regular (saturation did not stabilize).
    NotRegular = 4,
    NotGeometric = 5,
    /// The working precision is too small for the request.
    PrecisionTooLow = 6,
    /// Any other mathematical error.
    MathError = 7,
    Panic = 8,
}

/// Opaque handle to an (a,b)-module.
pub struct AbmodModule {
    inner: AbModule,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AbmodStatus {
    match e {
        _ if e.is_input_error() => AbmodStatus::InvalidInput,
        Error::NotStabilized(_) | Error::NotRegular => AbmodStatus::NotRegular,
        Error::NotGeometric(_) => AbmodStatus::NotGeometric,
        Error::PrecisionTooLow(_) => AbmodStatus::PrecisionTooLow,
        _ => AbmodStatus::MathError,
    }
}

enum Failure {
    Status(AbmodStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AbmodStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbmodStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(format!("[{}] {e}", e.code()));
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            AbmodStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(AbmodStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(AbmodStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn module_ref<'a>(m: *const AbmodModule) -> Result<&'a AbModule, Failure> {
    m.as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| Failure::Status(AbmodStatus::NullPointer, "null module handle".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(AbmodStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Status(AbmodStatus::MathError, "interior nul".into()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_module(out: *mut *mut AbmodModule, m: AbModule) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(AbmodStatus::NullPointer, "null output pointer".into()));
    }
    out.write(Box::into_raw(Box::new(AbmodModule { inner: m })));
    Ok(())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Status(AbmodStatus::InvalidInput, msg.into())
}

/// Copy of the last error message on this thread, or null. Free with
/// `abmod_string_free`.
#[no_mangle]
pub extern "C" fn abmod_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn abmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a module from its JSON form `{rank, precision, matrix}`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_from_json(json: *const c_char, out: *mut *mut AbmodModule) -> AbmodStatus {
    guard(|| {
        let text = read_str(json)?;
        let m: ModuleJson = serde_json::from_str(text).map_err(|e| invalid(format!("JSON: {e}")))?;
        write_module(out, m.to_module()?)
    })
}

/// Builds `Ã/ÃΠ` at precision `precision` from the text of `Π`, either a
/// product of factors `(a - λ b)` and `inv(S)` or a general element.
///
/// # Safety
/// `text` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_from_presentation(
    text: *const c_char,
    precision: usize,
    out: *mut *mut AbmodModule,
) -> AbmodStatus {
    guard(|| {
        if precision < 4 {
            return Err(invalid("precision must be at least 4"));
        }
        let m = match parse(read_str(text)?, precision)? {
            Parsed::Presentation(p) => module_from_presentation(&p, precision)?,
            Parsed::Element(e) => module_from_element(&e)?,
        };
        write_module(out, m)
    })
}

/// # Safety
/// `m` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_free(m: *mut AbmodModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_rank(m: *const AbmodModule, out: *mut usize) -> AbmodStatus {
    guard(|| write_out(out, module_ref(m)?.rank()))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_precision(m: *const AbmodModule, out: *mut usize) -> AbmodStatus {
    guard(|| write_out(out, module_ref(m)?.precision()))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_module_to_json(m: *const AbmodModule, out: *mut *mut c_char) -> AbmodStatus {
    guard(|| {
        let j = serde_json::to_string(&ModuleJson::from_module(module_ref(m)?)).expect("serializable");
        write_string(out, j)
    })
}

/// Bernstein polynomial as text, e.g. `x^2 + x + 1/4`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_bernstein_polynomial(m: *const AbmodModule, out: *mut *mut c_char) -> AbmodStatus {
    guard(|| write_string(out, bernstein_polynomial(module_ref(m)?)?.to_pretty()))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_is_geometric(m: *const AbmodModule, out: *mut bool) -> AbmodStatus {
    guard(|| write_out(out, is_geometric(module_ref(m)?)?))
}

/// Saturation: the saturated module, the number of enlarging steps and the
/// gap `δ` with `b^δ Ẽ ⊆ E`. `steps` and `gap` may be null.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_saturate(
    m: *const AbmodModule,
    out: *mut *mut AbmodModule,
    steps: *mut usize,
    gap: *mut usize,
) -> AbmodStatus {
    guard(|| {
        let s = saturate(module_ref(m)?, None);
        let sat = s.saturated()?.clone();
        if !steps.is_null() {
            steps.write(s.steps);
        }
        if !gap.is_null() {
            gap.write(s.gap);
        }
        write_module(out, sat)
    })
}

/// Principal Jordan–Hölder λ-sequence of a fresco as a JSON array of
/// rationals, e.g. `["3/2","1/2"]`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_principal_jh(m: *const AbmodModule, out: *mut *mut c_char) -> AbmodStatus {
    guard(|| {
        let seq = principal_jh(module_ref(m)?)?;
        let l: Vec<String> = seq.lambdas().iter().map(fmt_rational).collect();
        write_string(out, serde_json::to_string(&l).expect("serializable"))
    })
}

/// Theme generated by an expansion given as a JSON array of
/// `{lambda, m, j, coeff}` terms. Writes a JSON object with `rank`,
/// `relation`, `module` and, when primitive, `fundamental_data`.
///
/// # Safety
/// `json` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abmod_theme_of_expansion(
    json: *const c_char,
    shift_precision: usize,
    out: *mut *mut c_char,
) -> AbmodStatus {
    guard(|| {
        let terms: Vec<TermJson> =
            serde_json::from_str(read_str(json)?).map_err(|e| invalid(format!("JSON: {e}")))?;
        let x = expansion_from_json(&terms, shift_precision)?;
        let r = generate_theme(&x)?;
        let mut v = json!({
            "rank": r.rank(),
            "relation": ElementJson::from_element(&r.relation),
            "module": ModuleJson::from_module(&r.module),
        });
        if let Ok(d) = fundamental_data(&r.module) {
            v["fundamental_data"] = serde_json::to_value(&d).expect("serializable");
        }
        write_string(out, v.to_string())
    })
}
