//! C interface to `surface-decode`.
//!
//! Handles are opaque and owned by the caller, who frees them with the
//! matching `*_free`. Bit vectors cross the boundary as one byte per bit
//! (0 or 1). Every function returns an `SdStatus`; on failure
//! `sd_last_error` describes the problem on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_rational::BigRational;
use surface_decode::smlc::{Backend, SmlcDecoder};
use surface_decode::smw::{decode_smw, default_profile, Solver};
use surface_decode::{Bits, Chain, CodeFamily, Error, Family, Grade, Lattice, LatticePair, Side};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSyndrome = 3,
    Internal = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdFamily {
    Toric = 0,
    Planar = 1,
    Rotated = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdSide {
    Primal = 0,
    Dual = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdSolver {
    Blossom = 0,
    Separator = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdBackend {
    Exact = 0,
    Float = 1,
}

/// Primal and dual lattice of one code.
pub struct SdCode {
    pair: LatticePair,
}

/// Most-likely-coset decoder for one side of a code at fixed noise.
pub struct SdSmlc {
    decoder: SmlcDecoder,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::InvalidSyndromeParity | Error::GradeMismatch { .. } => SdStatus::InvalidSyndrome,
        e if e.is_user_error() => SdStatus::InvalidArgument,
        _ => SdStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SdStatus, String)>) -> SdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside surface-decode");
            SdStatus::Panic
        }
    }
}

fn fail(e: Error) -> (SdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SdStatus, String) {
    (SdStatus::NullPointer, format!("{what} is null"))
}

fn side_of(s: SdSide) -> Side {
    match s {
        SdSide::Primal => Side::Primal,
        SdSide::Dual => Side::Dual,
    }
}

unsafe fn read_bits(ptr: *const u8, len: usize, expected: usize, what: &str) -> Result<Bits, (SdStatus, String)> {
    if len != expected {
        return Err((SdStatus::InvalidArgument, format!("{what} has length {len}, expected {expected}")));
    }
    if len == 0 {
        return Ok(Bits::zeros(0));
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    let bytes = std::slice::from_raw_parts(ptr, len);
    if bytes.iter().any(|&b| b > 1) {
        return Err((SdStatus::InvalidArgument, format!("{what} entries must be 0 or 1")));
    }
    Ok(Bits::from_bools(&bytes.iter().map(|&b| b == 1).collect::<Vec<_>>()))
}

unsafe fn write_bits(bits: &Bits, ptr: *mut u8, len: usize, what: &str) -> Result<(), (SdStatus, String)> {
    if len != bits.len() {
        return Err((SdStatus::InvalidArgument, format!("{what} has length {len}, expected {}", bits.len())));
    }
    if len == 0 {
        return Ok(());
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    let out = std::slice::from_raw_parts_mut(ptr, len);
    for (i, o) in out.iter_mut().enumerate() {
        *o = bits.get(i) as u8;
    }
    Ok(())
}

unsafe fn code_ref<'a>(code: *const SdCode) -> Result<&'a SdCode, (SdStatus, String)> {
    code.as_ref().ok_or_else(|| null("code"))
}

fn lattice(code: &SdCode, side: SdSide) -> &Lattice {
    code.pair.get(side_of(side))
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the primal and dual lattice of a code of distance `distance`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sd_code_new(family: SdFamily, distance: usize, out: *mut *mut SdCode) -> SdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match family {
            SdFamily::Toric => Family::Toric,
            SdFamily::Planar => Family::Planar,
            SdFamily::Rotated => Family::Rotated,
        };
        let pair = CodeFamily::new(kind, distance).and_then(LatticePair::new).map_err(fail)?;
        *out = Box::into_raw(Box::new(SdCode { pair }));
        Ok(())
    })
}

/// # Safety
/// `code` must come from `sd_code_new` and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sd_code_free(code: *mut SdCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Qubit and check counts of one side.
///
/// # Safety
/// `code` must be a live handle; `n_qubits` and `n_checks` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_code_sizes(
    code: *const SdCode,
    side: SdSide,
    n_qubits: *mut usize,
    n_checks: *mut usize,
) -> SdStatus {
    guard(|| {
        let lat = lattice(code_ref(code)?, side);
        if n_qubits.is_null() || n_checks.is_null() {
            return Err(null("output"));
        }
        *n_qubits = lat.n_qubits();
        *n_checks = lat.n_checks();
        Ok(())
    })
}

/// Syndrome of an error on one side.
///
/// # Safety
/// `error` holds `n_qubits` bytes and `syndrome` has room for `n_checks`.
#[no_mangle]
pub unsafe extern "C" fn sd_syndrome(
    code: *const SdCode,
    side: SdSide,
    error: *const u8,
    n_qubits: usize,
    syndrome: *mut u8,
    n_checks: usize,
) -> SdStatus {
    guard(|| {
        let lat = lattice(code_ref(code)?, side);
        let e = read_bits(error, n_qubits, lat.n_qubits(), "error")?;
        let s = lat.boundary(&Chain::new(Grade::C1, e)).map_err(fail)?;
        write_bits(&s.bits, syndrome, n_checks, "syndrome")
    })
}

/// Whether `a + b` is a stabilizer of the side, i.e. the two errors are
/// logically equivalent.
///
/// # Safety
/// `a` and `b` hold `n_qubits` bytes each; `equivalent` is writable.
#[no_mangle]
pub unsafe extern "C" fn sd_equivalent(
    code: *const SdCode,
    side: SdSide,
    a: *const u8,
    b: *const u8,
    n_qubits: usize,
    equivalent: *mut bool,
) -> SdStatus {
    guard(|| {
        let lat = lattice(code_ref(code)?, side);
        let a = read_bits(a, n_qubits, lat.n_qubits(), "a")?;
        let b = read_bits(b, n_qubits, lat.n_qubits(), "b")?;
        if equivalent.is_null() {
            return Err(null("equivalent"));
        }
        *equivalent = lat.stabilizer_space().contains(&a.xor(&b));
        Ok(())
    })
}

/// Minimum-weight correction for a syndrome; `weight` receives its size.
///
/// # Safety
/// `syndrome` holds `n_checks` bytes, `correction` has room for
/// `n_qubits`, and `weight` is writable or null.
#[no_mangle]
pub unsafe extern "C" fn sd_decode_smw(
    code: *const SdCode,
    side: SdSide,
    solver: SdSolver,
    syndrome: *const u8,
    n_checks: usize,
    correction: *mut u8,
    n_qubits: usize,
    weight: *mut u64,
) -> SdStatus {
    guard(|| {
        let lat = lattice(code_ref(code)?, side);
        let s = Chain::new(Grade::C0, read_bits(syndrome, n_checks, lat.n_checks(), "syndrome")?);
        let solver = match solver {
            SdSolver::Blossom => Solver::Blossom,
            SdSolver::Separator => Solver::Separator,
        };
        let r = decode_smw(lat, &s, &default_profile(lat), solver).map_err(fail)?;
        write_bits(&r.error.bits, correction, n_qubits, "correction")?;
        if !weight.is_null() {
            *weight = r.weight as u64;
        }
        Ok(())
    })
}

/// Most-likely-coset decoder for independent flips with probability
/// `p_num / p_den` on every qubit (at most 1/2).
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_smlc_new(
    code: *const SdCode,
    side: SdSide,
    p_num: u64,
    p_den: u64,
    backend: SdBackend,
    out: *mut *mut SdSmlc,
) -> SdStatus {
    guard(|| {
        let code = code_ref(code)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if p_den == 0 {
            return Err((SdStatus::InvalidArgument, "p_den is zero".into()));
        }
        let p = BigRational::new(BigInt::from(p_num), BigInt::from(p_den));
        let n = lattice(code, side).n_qubits();
        let backend = match backend {
            SdBackend::Exact => Backend::Exact,
            SdBackend::Float => Backend::Float,
        };
        let decoder = SmlcDecoder::new(&code.pair, side_of(side), &vec![p; n], backend).map_err(fail)?;
        *out = Box::into_raw(Box::new(SdSmlc { decoder }));
        Ok(())
    })
}

/// # Safety
/// `dec` must come from `sd_smlc_new` and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sd_smlc_free(dec: *mut SdSmlc) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Writes a representative of the most likely coset. `chosen` receives its
/// index among the candidates (0 or 1; 0 to 3 on the torus) and `tie`
/// whether another candidate scored the same; either may be null.
///
/// # Safety
/// `syndrome` holds `n_checks` bytes and `correction` has room for
/// `n_qubits`.
#[no_mangle]
pub unsafe extern "C" fn sd_smlc_decode(
    dec: *const SdSmlc,
    syndrome: *const u8,
    n_checks: usize,
    correction: *mut u8,
    n_qubits: usize,
    chosen: *mut usize,
    tie: *mut bool,
) -> SdStatus {
    guard(|| {
        let dec = &dec.as_ref().ok_or_else(|| null("decoder"))?.decoder;
        let lat = dec.lattice();
        let s = Chain::new(Grade::C0, read_bits(syndrome, n_checks, lat.n_checks(), "syndrome")?);
        let d = dec.decide(&s).map_err(fail)?;
        write_bits(&d.chosen_error().bits, correction, n_qubits, "correction")?;
        if !chosen.is_null() {
            *chosen = d.chosen;
        }
        if !tie.is_null() {
            *tie = d.tie;
        }
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
