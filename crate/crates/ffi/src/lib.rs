//! C interface to `multiber`.
//!
//! Systems are opaque handles built from the same JSON description the command line tool reads.
//! Every function returns an [`MbStatus`]; on failure a message is kept per thread and can be
//! read with [`mb_last_error`]. Strings returned through `char **` outputs are owned by the
//! caller and must be released with [`mb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_double, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use multiber::affineseries::{affine_eval, AffineSystem};
use multiber::arrangement::tope_of;
use multiber::berseries::{ber_eval, ber_tope_poly};
use multiber::cli::{Loaded, SystemDescription};
use multiber::eulermaclaurin::{em_verify, TestFunction};
use multiber::exactlinalg::{parse_rat, parse_vec, to_f64, Rat};
use multiber::splines::{decomposition_eval, sufficient_radius};
use multiber::wallcross::jump;
use multiber::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MbStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Genericity = 3,
    Utf8 = 4,
    Internal = 5,
}

/// Opaque handle to a validated system.
pub struct MbSystem {
    loaded: Loaded,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MbStatus {
    match e {
        Error::Irregular(_) | Error::NonGeneric(_) | Error::Genericity { .. } => MbStatus::Genericity,
        Error::Internal(_) => MbStatus::Internal,
        _ => MbStatus::Validation,
    }
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Run `f`, translating errors and panics into a status and the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> MbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MbStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MbStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            MbStatus::Utf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside the library".into());
            MbStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn read_system<'a>(p: *const MbSystem) -> Result<&'a MbSystem, Failure> {
    p.as_ref().ok_or(Failure::Null("system"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output"));
    }
    let c = CString::new(s).map_err(|_| Failure::Lib(Error::Internal("nul byte in output".into())))?;
    *out = c.into_raw();
    Ok(())
}

fn point(l: &Loaded, text: &str) -> Result<Vec<Rat>, Error> {
    let v = parse_vec(text)?;
    if v.len() != l.sys.rank() {
        return Err(Error::DimensionMismatch { expected: l.sys.rank(), found: v.len() });
    }
    Ok(l.sys.to_lattice_coords(&v))
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn mb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn mb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse and validate a JSON system description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mb_system_from_json(json: *const c_char, out: *mut *mut MbSystem) -> MbStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("output"));
        }
        let text = read_str(json, "json")?;
        let loaded = SystemDescription::parse(text)?.load()?;
        *out = Box::into_raw(Box::new(MbSystem { loaded }));
        Ok(())
    })
}

/// # Safety
/// `sys` must come from [`mb_system_from_json`] and not have been freed already. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mb_system_free(sys: *mut MbSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mb_system_rank(sys: *const MbSystem, out: *mut usize) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        if out.is_null() {
            return Err(Failure::Null("output"));
        }
        *out = s.loaded.sys.rank();
        Ok(())
    })
}

/// Tope polynomial at a regular point `"p1,...,pr"` (ambient coordinates), as text.
///
/// # Safety
/// Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_ber_tope_poly(sys: *const MbSystem, at: *const c_char, out: *mut *mut c_char) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        let v = point(&s.loaded, read_str(at, "point")?)?;
        let p = ber_tope_poly(&s.loaded.sys, &v)?;
        write_string(out, s.loaded.sys.poly_to_ambient(&p).to_string())
    })
}

/// Exact value at a regular point as `"p/q"`, and its nearest double when `approx` is not NULL.
///
/// # Safety
/// Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_ber_eval(
    sys: *const MbSystem,
    at: *const c_char,
    out: *mut *mut c_char,
    approx: *mut c_double,
) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        let v = point(&s.loaded, read_str(at, "point")?)?;
        tope_of(&s.loaded.sys, &v)?;
        let x = ber_eval(&s.loaded.sys, &v)?;
        if !approx.is_null() {
            *approx = to_f64(&x);
        }
        write_string(out, x.to_string())
    })
}

/// Jump polynomial from the tope of `at2` to the tope of `at1`.
///
/// # Safety
/// Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_jump(
    sys: *const MbSystem,
    at1: *const c_char,
    at2: *const c_char,
    out: *mut *mut c_char,
) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        let l = &s.loaded;
        let t1 = tope_of(&l.sys, &point(l, read_str(at1, "first point")?)?)?;
        let t2 = tope_of(&l.sys, &point(l, read_str(at2, "second point")?)?)?;
        let j = jump(&l.sys, &t1, &t2)?;
        write_string(out, l.sys.poly_to_ambient(&j).to_string())
    })
}

/// Sum of the decomposition terms at `at` for the polarization point `beta`, as `"p/q"`.
/// `radius` may be NULL for the default search radius.
///
/// # Safety
/// Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mb_decompose_eval(
    sys: *const MbSystem,
    beta: *const c_char,
    at: *const c_char,
    radius: *const c_char,
    out: *mut *mut c_char,
) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        let l = &s.loaded;
        let b = point(l, read_str(beta, "beta")?)?;
        let v = point(l, read_str(at, "point")?)?;
        let r = if radius.is_null() { sufficient_radius(&v, &b, &l.gram) } else { parse_rat(read_str(radius, "radius")?)? };
        let x = decomposition_eval(&l.sys, &b, &v, &r, &l.gram)?;
        write_string(out, x.to_string())
    })
}

/// Affine series value at `at`; constants missing from the description count as 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mb_affine_eval(
    sys: *const MbSystem,
    at: *const c_char,
    re: *mut c_double,
    im: *mut c_double,
) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("output"));
        }
        let l = &s.loaded;
        let v = point(l, read_str(at, "point")?)?;
        let z = l.z.clone().unwrap_or_else(|| vec![Rat::from_integer(0.into()); l.sys.len()]);
        let value = affine_eval(&AffineSystem::new(l.sys.clone(), z)?, &v)?;
        *re = value.re;
        *im = value.im;
        Ok(())
    })
}

/// Euler-MacLaurin check for `exp(-a|v - c|^2)`; `gaussian` is `"a,c1,...,cr"` in lattice coordinates.
/// Writes the absolute difference between the lattice sum and the corrected integral.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mb_em_error(
    sys: *const MbSystem,
    gaussian: *const c_char,
    lattice_radius: u32,
    quad_step: c_double,
    abs_error: *mut c_double,
) -> MbStatus {
    guard(|| {
        let s = read_system(sys)?;
        if abs_error.is_null() {
            return Err(Failure::Null("output"));
        }
        let l = &s.loaded;
        let parts = parse_vec(read_str(gaussian, "gaussian")?)?;
        if parts.len() != l.sys.rank() + 1 {
            return Err(Error::DimensionMismatch { expected: l.sys.rank() + 1, found: parts.len() }.into());
        }
        if !(quad_step > 0.0) {
            return Err(Error::InvalidInput("quadrature step must be positive".into()).into());
        }
        let f = TestFunction::gaussian(parts[1..].to_vec(), parts[0].clone())?;
        *abs_error = em_verify(&l.sys, &f, lattice_radius, quad_step)?.abs_error;
        Ok(())
    })
}
