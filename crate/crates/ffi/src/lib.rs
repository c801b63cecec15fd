//! C ABI for `qhdim`.
//!
//! Every function returns a [`QhStatus`]; results go through out-pointers.
//! On failure a message is kept per thread and can be read with
//! [`qhdim_last_error`]. Strings returned by the library are owned by the
//! caller and released with [`qhdim_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qhdim::degeneration::{Certifier, CertifierConfig, Outcome};
use qhdim::minus_one::{enumerate_qh_classes_with, MinusOneClass};
use qhdim::oracle::{measure_dim, OracleConfig};
use qhdim::{dimension, QuasiHomogeneousSystem, Status};

/// Error codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExhausted = 3,
    Io = 4,
    IndexOutOfRange = 5,
    Panic = 6,
}

/// How a dimension was obtained.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhDimStatus {
    NonSpecialProved = 0,
    SpecialProved = 1,
    Conjectural = 2,
    OracleMeasured = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QhOutcome {
    EmptyProved = 0,
    NonSpecialProved = 1,
    Inconclusive = 2,
}

/// `L(d, m0, n, m)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QhSystem {
    pub d: i64,
    pub m0: i64,
    pub n: i64,
    pub m: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QhInvariants {
    pub v: i64,
    pub e: i64,
    pub self_int: i64,
    pub genus: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QhDimension {
    pub dim: i64,
    pub v: i64,
    pub e: i64,
    pub status: QhDimStatus,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QhCertificate {
    pub outcome: QhOutcome,
    /// Dimension given by the proof tree, or -2 when it gives none. Only a
    /// proof when `outcome` is not inconclusive.
    pub dim: i64,
    pub oracle_assisted: bool,
}

/// Opaque certifier with its memo table.
pub struct QhCertifier {
    inner: Certifier,
}

/// Opaque list of (-1)-classes.
pub struct QhClassList {
    classes: Vec<MinusOneClass>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &qhdim::Error) -> QhStatus {
    match err {
        qhdim::Error::BudgetExhausted(_) => QhStatus::BudgetExhausted,
        qhdim::Error::Cache(_) => QhStatus::Io,
        _ => QhStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QhStatus, String)>) -> QhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QhStatus::Panic
        }
    }
}

fn lib<T>(r: qhdim::Result<T>) -> Result<T, (QhStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn out<'a, T>(p: *mut T) -> Result<&'a mut T, (QhStatus, String)> {
    // SAFETY: callers pass either null or a valid, aligned, writable pointer
    unsafe { p.as_mut() }.ok_or((QhStatus::NullPointer, "null output pointer".into()))
}

fn system(s: QhSystem) -> Result<QuasiHomogeneousSystem, (QhStatus, String)> {
    lib(QuasiHomogeneousSystem::new(s.d, s.m0, s.n, s.m))
}

impl From<QuasiHomogeneousSystem> for QhSystem {
    fn from(l: QuasiHomogeneousSystem) -> Self {
        let (d, m0, n, m) = l.tuple();
        QhSystem { d, m0, n, m }
    }
}

/// Last error message on this thread, or null. Valid until the next call
/// into the library from the same thread; do not free.
#[no_mangle]
pub extern "C" fn qhdim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qhdim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_invariants(l: QhSystem, result: *mut QhInvariants) -> QhStatus {
    guard(|| {
        let inv = system(l)?.invariants();
        *out(result)? = QhInvariants {
            v: inv.v,
            e: inv.e,
            self_int: inv.self_int,
            genus: inv.genus,
        };
        Ok(())
    })
}

/// Dimension from the classifier.
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_dimension(l: QhSystem, result: *mut QhDimension) -> QhStatus {
    guard(|| {
        let l = system(l)?;
        let r = dimension(&l);
        *out(result)? = QhDimension {
            dim: r.dim,
            v: l.virtual_dim(),
            e: l.expected_dim(),
            status: match r.status {
                Status::NonSpecialProved => QhDimStatus::NonSpecialProved,
                Status::SpecialProved => QhDimStatus::SpecialProved,
                Status::Conjectural => QhDimStatus::Conjectural,
                Status::OracleMeasured => QhDimStatus::OracleMeasured,
            },
        };
        Ok(())
    })
}

/// Dimension measured by random specialization modulo `prime`. Pass 0 for
/// `prime` or `trials` to use the defaults.
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_oracle_dim(
    l: QhSystem,
    seed: u64,
    trials: u32,
    prime: u64,
    dim: *mut i64,
) -> QhStatus {
    guard(|| {
        let l = system(l)?;
        let mut cfg = OracleConfig::with_seed(seed);
        if trials > 0 {
            cfg.trials = trials;
        }
        if prime > 0 {
            cfg.prime = prime;
        }
        *out(dim)? = lib(measure_dim(&l, &cfg))?.dim;
        Ok(())
    })
}

/// New certifier; `budget` 0 means the default. Free with
/// [`qhdim_certifier_free`].
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_certifier_new(
    budget: u64,
    handle: *mut *mut QhCertifier,
) -> QhStatus {
    guard(|| {
        let slot = out(handle)?;
        let mut config = CertifierConfig::default();
        if budget > 0 {
            config.budget = usize::try_from(budget).unwrap_or(usize::MAX);
        }
        *slot = Box::into_raw(Box::new(QhCertifier {
            inner: Certifier::new(config),
        }));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`qhdim_certifier_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qhdim_certifier_free(handle: *mut QhCertifier) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn certifier<'a>(h: *const QhCertifier) -> Result<&'a QhCertifier, (QhStatus, String)> {
    // SAFETY: handles are created by qhdim_certifier_new
    unsafe { h.as_ref() }.ok_or((QhStatus::NullPointer, "null certifier".into()))
}

/// Certify `l`. If `trace` is not null it receives the proof tree as text,
/// to be released with [`qhdim_string_free`].
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_certify(
    handle: *const QhCertifier,
    l: QhSystem,
    result: *mut QhCertificate,
    trace: *mut *mut c_char,
) -> QhStatus {
    guard(|| {
        let c = certifier(handle)?;
        let l = system(l)?;
        let result = out(result)?;
        let cert = lib(c.inner.certify(&l))?;
        *result = QhCertificate {
            outcome: match cert.outcome {
                Outcome::EmptyProved => QhOutcome::EmptyProved,
                Outcome::NonSpecialProved => QhOutcome::NonSpecialProved,
                Outcome::Inconclusive => QhOutcome::Inconclusive,
            },
            dim: cert.dim.unwrap_or(-2),
            oracle_assisted: cert.oracle_assisted,
        };
        // SAFETY: null or a valid pointer from the caller
        if let Some(t) = unsafe { trace.as_mut() } {
            let text = CString::new(cert.trace()).map_err(|e| (QhStatus::Panic, e.to_string()))?;
            *t = text.into_raw();
        }
        Ok(())
    })
}

fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, (QhStatus, String)> {
    if p.is_null() {
        return Err((QhStatus::NullPointer, "null path".into()));
    }
    // SAFETY: non-null, NUL-terminated per the API contract
    let s = unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (QhStatus::InvalidArgument, "path is not UTF-8".into()))?;
    Ok(Path::new(s))
}

/// Load a certificate cache. `loaded` (optional) receives the entry count.
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_certifier_load(
    handle: *const QhCertifier,
    path: *const c_char,
    loaded: *mut u64,
) -> QhStatus {
    guard(|| {
        let n = lib(certifier(handle)?.inner.load(path_arg(path)?))?;
        // SAFETY: null or a valid pointer from the caller
        if let Some(slot) = unsafe { loaded.as_mut() } {
            *slot = n as u64;
        }
        Ok(())
    })
}

/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_certifier_save(
    handle: *const QhCertifier,
    path: *const c_char,
) -> QhStatus {
    guard(|| lib(certifier(handle)?.inner.save(path_arg(path)?)))
}

/// Quasi-homogeneous (-1)-classes with `m <= m_max`, the pencil of lines
/// through `p0` listed up to `e_max`. Free with [`qhdim_class_list_free`].
///
/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_class_list_new(
    m_max: i64,
    e_max: i64,
    handle: *mut *mut QhClassList,
) -> QhStatus {
    guard(|| {
        let slot = out(handle)?;
        if m_max < 0 || e_max < 0 || m_max > 10_000 || e_max > 1_000_000 {
            return Err((
                QhStatus::InvalidArgument,
                format!("bounds m_max = {m_max}, e_max = {e_max}"),
            ));
        }
        *slot = Box::into_raw(Box::new(QhClassList {
            classes: enumerate_qh_classes_with(m_max, e_max),
        }));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`qhdim_class_list_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qhdim_class_list_free(handle: *mut QhClassList) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn class_list<'a>(h: *const QhClassList) -> Result<&'a QhClassList, (QhStatus, String)> {
    // SAFETY: handles are created by qhdim_class_list_new
    unsafe { h.as_ref() }.ok_or((QhStatus::NullPointer, "null class list".into()))
}

/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_class_list_len(
    handle: *const QhClassList,
    len: *mut u64,
) -> QhStatus {
    guard(|| {
        *out(len)? = class_list(handle)?.classes.len() as u64;
        Ok(())
    })
}

/// # Safety
/// Pointer arguments must be null or valid for the access they describe;
/// handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qhdim_class_list_get(
    handle: *const QhClassList,
    index: u64,
    class: *mut QhSystem,
) -> QhStatus {
    guard(|| {
        let list = class_list(handle)?;
        let c = usize::try_from(index)
            .ok()
            .and_then(|i| list.classes.get(i))
            .ok_or((
                QhStatus::IndexOutOfRange,
                format!("index {index} of {}", list.classes.len()),
            ))?;
        *out(class)? = c.system.into();
        Ok(())
    })
}
