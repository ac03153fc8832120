//! C ABI for the cubic toolkit.
//!
//! Conventions:
//!
//! - every function returns a [`cubic_status`] code; results travel through
//!   out-parameters;
//! - series live behind the opaque handle [`cubic_series`], released with
//!   [`cubic_series_free`];
//! - arbitrary-precision values cross the boundary as decimal strings and
//!   reports as JSON documents, both allocated by this library and released
//!   with [`cubic_string_free`];
//! - panics never unwind across the boundary; they surface as
//!   `CUBIC_ERR_INTERNAL`.
//!
//! The matching header `include/cubic.h` is generated by cbindgen at build
//! time.

#![allow(non_camel_case_types)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use cubic_core::congruence::{self, CertificateStatus, CongruenceClaim, TupleSpec};
use cubic_core::partitions::{self, PkMethod};
use cubic_core::series::{self, EtaQuotientSpec};

/// Largest truncation order / coefficient index accepted over this ABI.
const MAX_ORDER: u64 = 1_000_000;

/// Status codes; `CUBIC_OK` is zero, everything else is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum cubic_status {
    CUBIC_OK = 0,
    /// A required pointer argument was null.
    CUBIC_ERR_NULL_ARGUMENT = 1,
    /// A string argument was not valid UTF-8.
    CUBIC_ERR_UTF8 = 2,
    /// A spec, claim, or tuple failed to parse.
    CUBIC_ERR_PARSE = 3,
    /// Arguments parsed but violate a precondition.
    CUBIC_ERR_INVALID_ARGUMENT = 4,
    /// An index or depth exceeds the supported range.
    CUBIC_ERR_OUT_OF_RANGE = 5,
    /// An internal invariant failed (a bug; nothing was leaked or corrupted).
    CUBIC_ERR_INTERNAL = 6,
}

use cubic_status::*;

/// Opaque handle to a truncated integer-coefficient series.
pub struct cubic_series {
    inner: series::IntegerSeries,
}

fn guarded(f: impl FnOnce() -> cubic_status + UnwindSafe) -> cubic_status {
    catch_unwind(f).unwrap_or(CUBIC_ERR_INTERNAL)
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, cubic_status> {
    if s.is_null() {
        return Err(CUBIC_ERR_NULL_ARGUMENT);
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| CUBIC_ERR_UTF8)
}

fn give_string(text: String, out: *mut *mut c_char) -> cubic_status {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CUBIC_OK
        }
        Err(_) => CUBIC_ERR_INTERNAL,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn cubic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned by a `cubic_*` function
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cubic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Expands the eta-quotient-style product described by `spec`
/// (`delta:exponent,...`) to the inclusive truncation `order` and returns a
/// handle in `*out`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_series_expand(
    spec: *const c_char,
    order: u64,
    out: *mut *mut cubic_series,
) -> cubic_status {
    guarded(|| {
        if out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        let text = match unsafe { read_str(spec) } {
            Ok(t) => t,
            Err(code) => return code,
        };
        if order > MAX_ORDER {
            return CUBIC_ERR_OUT_OF_RANGE;
        }
        let parsed: EtaQuotientSpec = match text.parse() {
            Ok(p) => p,
            Err(_) => return CUBIC_ERR_PARSE,
        };
        let inner = series::expand(&parsed, order as usize);
        unsafe { *out = Box::into_raw(Box::new(cubic_series { inner })) };
        CUBIC_OK
    })
}

/// Stores the inclusive truncation order of `series` in `*out`.
///
/// # Safety
/// `series` must be a live handle from [`cubic_series_expand`]; `out`
/// non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_series_order(
    series: *const cubic_series,
    out: *mut u64,
) -> cubic_status {
    guarded(|| {
        if series.is_null() || out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        unsafe { *out = (*series).inner.order() as u64 };
        CUBIC_OK
    })
}

/// Stores the coefficient of `q^index` as a decimal string in `*out`;
/// release it with [`cubic_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_series_coeff(
    series: *const cubic_series,
    index: u64,
    out: *mut *mut c_char,
) -> cubic_status {
    guarded(|| {
        if series.is_null() || out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        let inner = unsafe { &(*series).inner };
        if index > inner.order() as u64 {
            return CUBIC_ERR_OUT_OF_RANGE;
        }
        give_string(inner.coeff(index as usize).to_string(), out)
    })
}

/// Releases a series handle. Null is a no-op.
///
/// # Safety
/// `series` must be null or a live handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cubic_series_free(series: *mut cubic_series) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Computes `p_k(n)` exactly and stores it as a decimal string in `*out`.
///
/// # Safety
/// `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_pk(k: u64, n: u64, out: *mut *mut c_char) -> cubic_status {
    guarded(|| {
        if out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        if k == 0 {
            return CUBIC_ERR_INVALID_ARGUMENT;
        }
        if n > 100_000 {
            return CUBIC_ERR_OUT_OF_RANGE;
        }
        let table = partitions::pk_table(k, n as usize, PkMethod::EtaExpansion);
        give_string(table.value(n as usize).to_string(), out)
    })
}

/// Computes `p_k(n) mod modulus` through the residue-ring pipeline and
/// stores it in `*out`.
///
/// # Safety
/// `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_pk_residue(
    k: u64,
    n: u64,
    modulus: u64,
    out: *mut u64,
) -> cubic_status {
    guarded(|| {
        if out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        if k == 0 || modulus < 2 {
            return CUBIC_ERR_INVALID_ARGUMENT;
        }
        if n > MAX_ORDER {
            return CUBIC_ERR_OUT_OF_RANGE;
        }
        let spec = match EtaQuotientSpec::from_pairs([(1, -1), (k, -1)]) {
            Ok(s) => s,
            Err(_) => return CUBIC_ERR_INVALID_ARGUMENT,
        };
        match series::expand_mod(&spec, n as usize, modulus) {
            Ok(residues) => {
                unsafe { *out = residues.coeff(n as usize) };
                CUBIC_OK
            }
            Err(_) => CUBIC_ERR_INVALID_ARGUMENT,
        }
    })
}

/// The double-counted divisor sum: divisors that are multiples of `k` count
/// twice.
///
/// # Safety
/// `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_sigma_k(k: u64, n: u64, out: *mut u64) -> cubic_status {
    guarded(|| {
        if out.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        if k == 0 || n == 0 {
            return CUBIC_ERR_INVALID_ARGUMENT;
        }
        unsafe { *out = partitions::sigma_k(k, n) };
        CUBIC_OK
    })
}

/// Verifies the congruence claim given as a JSON document (the `claim`
/// object of the certificate schema). The full certificate JSON lands in
/// `*out_certificate` (free with [`cubic_string_free`]) and `*out_passed`
/// is 1 when the claim verified (for tuple-grounded claims that means
/// lemma-complete) and 0 otherwise.
///
/// # Safety
/// `claim_json` must be a valid NUL-terminated string; the out-pointers
/// non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_verify_claim_json(
    claim_json: *const c_char,
    out_certificate: *mut *mut c_char,
    out_passed: *mut i32,
) -> cubic_status {
    guarded(|| {
        if out_certificate.is_null() || out_passed.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        let text = match unsafe { read_str(claim_json) } {
            Ok(t) => t,
            Err(code) => return code,
        };
        let claim: CongruenceClaim = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(_) => return CUBIC_ERR_PARSE,
        };
        let worst_index = claim
            .progression
            .m
            .saturating_mul(claim.n_max)
            .saturating_add(claim.progression.m);
        if worst_index > MAX_ORDER {
            return CUBIC_ERR_OUT_OF_RANGE;
        }
        match congruence::verify_progression(&claim) {
            Ok(cert) => {
                let passed = cert.all_zero
                    && (claim.tuple.is_none() || cert.status == CertificateStatus::LemmaComplete);
                unsafe { *out_passed = passed as i32 };
                give_string(cert.to_json(), out_certificate)
            }
            Err(_) => CUBIC_ERR_INVALID_ARGUMENT,
        }
    })
}

/// Computes orbit, hypothesis table, and exact bound for the verification
/// tuple given as JSON (`{"m":..,"M":..,"N":..,"t":..,"r":"..","r_prime":".."}`)
/// and stores the report JSON in `*out_report`.
///
/// # Safety
/// `tuple_json` must be a valid NUL-terminated string; `out_report`
/// non-null.
#[no_mangle]
pub unsafe extern "C" fn cubic_bound_json(
    tuple_json: *const c_char,
    out_report: *mut *mut c_char,
) -> cubic_status {
    guarded(|| {
        if out_report.is_null() {
            return CUBIC_ERR_NULL_ARGUMENT;
        }
        let text = match unsafe { read_str(tuple_json) } {
            Ok(t) => t,
            Err(code) => return code,
        };
        let spec: TupleSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(_) => return CUBIC_ERR_PARSE,
        };
        let tuple = match spec.to_tuple() {
            Ok(t) => t,
            Err(_) => return CUBIC_ERR_INVALID_ARGUMENT,
        };
        let report = congruence::bound_report(&tuple);
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        give_string(json, out_report)
    })
}
