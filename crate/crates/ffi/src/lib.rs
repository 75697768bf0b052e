//! C interface to the engine.
//!
//! Every fallible function returns a [`CdrStatus`]. On failure a message is
//! kept per thread and can be read with [`cdr_last_error`]. Strings handed
//! out by the library must be released with [`cdr_string_free`], states
//! with [`cdr_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cdr_core::cli::{cmd_ope, cmd_transform, parse_target, Format};
use cdr_core::coordinate::FieldRule;
use cdr_core::invariant_character::{compare, formula_length, partitions_at_most};
use cdr_core::log_monoid::{FinGenMonoid, MonoidHom};
use cdr_core::modes::{parse_state, Gamma0Cutoff, StateVector};
use cdr_core::vertex::nth_product;
use num::ToPrimitive;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Overflow = 5,
    Panic = 6,
}

/// Opaque handle to a state of the Fock module.
pub struct CdrState {
    inner: StateVector,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

struct Failure(CdrStatus, String);

impl Failure {
    fn parse(e: impl std::fmt::Display) -> Self {
        Failure(CdrStatus::ParseError, e.to_string())
    }

    fn arg(e: impl std::fmt::Display) -> Self {
        Failure(CdrStatus::InvalidArgument, e.to_string())
    }
}

/// Runs `body`, converting errors and panics to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CdrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            CdrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CdrStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CdrStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CdrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            CdrStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            CdrStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    let c = CString::new(s).map_err(|_| Failure(CdrStatus::Panic, "nul byte in output".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn read_state<'a>(p: *const CdrState, what: &str) -> Result<&'a StateVector, Failure> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or_else(|| Failure(CdrStatus::NullPointer, format!("{what} is null")))
}

fn cutoff_from(c: i32) -> Gamma0Cutoff {
    if c < 0 {
        Gamma0Cutoff::UNBOUNDED
    } else {
        Gamma0Cutoff::at(c as u32)
    }
}

/// Message for the last failing call on this thread; empty after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cdr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn cdr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cdr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a state such as `b[1,-1] g[2,0]^2|0>`.
///
/// # Safety
/// `text` must be a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_state_parse(
    text: *const c_char,
    out: *mut *mut CdrState,
) -> CdrStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let inner = parse_state(text).map_err(Failure::parse)?;
        write_out(out, Box::into_raw(Box::new(CdrState { inner })))
    })
}

/// # Safety
/// `s` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cdr_state_free(s: *mut CdrState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_state_to_string(
    s: *const CdrState,
    out: *mut *mut c_char,
) -> CdrStatus {
    guard(|| {
        let s = read_state(s, "state")?;
        write_string(out, s.to_string())
    })
}

/// `A_(n) B`, dropping monomials whose `gamma_0` degree exceeds `cutoff`
/// (negative for no cutoff). `truncated` may be null.
///
/// # Safety
/// `a`, `b` must be live handles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_nth_product(
    a: *const CdrState,
    n: i64,
    b: *const CdrState,
    cutoff: i32,
    out: *mut *mut CdrState,
    truncated: *mut bool,
) -> CdrStatus {
    guard(|| {
        let a = read_state(a, "a")?;
        let b = read_state(b, "b")?;
        let r = nth_product(a, n, b, cutoff_from(cutoff));
        if !truncated.is_null() {
            truncated.write(r.truncated);
        }
        write_out(out, Box::into_raw(Box::new(CdrState { inner: r.value })))
    })
}

/// Singular part of the OPE of two state literals as JSON.
///
/// # Safety
/// `a`, `b` must be nul-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_ope_json(
    a: *const c_char,
    b: *const c_char,
    cutoff: i32,
    out: *mut *mut c_char,
) -> CdrStatus {
    guard(|| {
        let a = read_str(a, "a")?;
        let b = read_str(b, "b")?;
        let c = (cutoff >= 0).then_some(cutoff as u32);
        let r = cmd_ope(a, b, c, Format::Json).map_err(|e| Failure::parse(e.0))?;
        write_string(out, r.body)
    })
}

/// The recursive length formula at `(n, r)` as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_formula_length(n: u32, r: u32, out: *mut *mut c_char) -> CdrStatus {
    guard(|| {
        if n < 2 || r < 1 {
            return Err(Failure::arg("need n >= 2 and r >= 1"));
        }
        write_string(out, formula_length(n, r).to_string())
    })
}

/// The length formula as `u64`; `Overflow` when it does not fit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_formula_length_u64(n: u32, r: u32, out: *mut u64) -> CdrStatus {
    guard(|| {
        if n < 2 || r < 1 {
            return Err(Failure::arg("need n >= 2 and r >= 1"));
        }
        let v = formula_length(n, r);
        let v = v
            .to_u64()
            .ok_or_else(|| Failure(CdrStatus::Overflow, format!("{v} does not fit in 64 bits")))?;
        write_out(out, v)
    })
}

/// Partitions of `m` into at most `n` parts; `Overflow` past `u64`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_partitions_at_most(n: u32, m: i64, out: *mut u64) -> CdrStatus {
    guard(|| {
        let v = partitions_at_most(n, m);
        let v = v
            .to_u64()
            .ok_or_else(|| Failure(CdrStatus::Overflow, format!("{v} does not fit in 64 bits")))?;
        write_out(out, v)
    })
}

/// Formula against oracle for `r = 1..=r_max` as JSON. A negative cutoff
/// selects the default.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_character_report_json(
    n: u32,
    r_max: u32,
    cutoff: i32,
    out: *mut *mut c_char,
) -> CdrStatus {
    guard(|| {
        if n < 2 || r_max < 1 {
            return Err(Failure::arg("need n >= 2 and r_max >= 1"));
        }
        let c = (cutoff >= 0).then_some(cutoff as u32);
        let report = compare(n, r_max, c);
        write_string(out, serde_json::to_string(&report).map_err(Failure::arg)?)
    })
}

/// Étaleness of the map from the monoid generated by `gens` (`(3,0);(0,3);(1,1)`)
/// into `target` (`N2` or a generator list), induced by the identity of
/// the ambient lattice, over a field of characteristic `p` (0 or prime).
///
/// # Safety
/// `gens`, `target` must be nul-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_monoid_etale_json(
    gens: *const c_char,
    target: *const c_char,
    p: u64,
    out: *mut *mut c_char,
) -> CdrStatus {
    guard(|| {
        let source = FinGenMonoid::parse(read_str(gens, "gens")?).map_err(Failure::parse)?;
        let target = parse_target(read_str(target, "target")?).map_err(Failure::parse)?;
        let id = cdr_core::log_monoid::snf::identity(source.rank());
        let hom = MonoidHom::new(source, target, id).map_err(Failure::arg)?;
        let v = hom.etale(p).map_err(Failure::arg)?;
        write_string(out, serde_json::to_string(&v).map_err(Failure::arg)?)
    })
}

/// Checks the transformed generating fields for `t -> f(t)` (a polynomial
/// in `g` such as `g+g^2`) under `rule` (`log-second-derivative`,
/// `log-jacobian` or `ordinary`; null for the first). The JSON carries a
/// `pass` flag; a failing check is still `Ok`.
///
/// # Safety
/// `f` must be a nul-terminated string, `rule` null or one, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdr_transform_verify_json(
    f: *const c_char,
    order: usize,
    cutoff: u32,
    rule: *const c_char,
    out: *mut *mut c_char,
) -> CdrStatus {
    guard(|| {
        let f = read_str(f, "f")?;
        let rule = if rule.is_null() {
            FieldRule::LogSecondDerivative
        } else {
            let name = read_str(rule, "rule")?;
            FieldRule::from_name(name)
                .ok_or_else(|| Failure::arg(format!("unknown rule {name}")))?
        };
        let r =
            cmd_transform(f, order, cutoff, rule, Format::Json).map_err(|e| Failure::arg(e.0))?;
        write_string(out, r.body)
    })
}
