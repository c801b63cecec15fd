use std::ffi::{CStr, CString};
use std::ptr;

use qhdim_ffi::*;

fn sys(d: i64, m0: i64, n: i64, m: i64) -> QhSystem {
    QhSystem { d, m0, n, m }
}

fn last_error() -> String {
    let p = qhdim_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn invariants_and_dimension() {
    unsafe { invariants_and_dimension_body() }
}

unsafe fn invariants_and_dimension_body() {
    let mut inv = QhInvariants {
        v: 0,
        e: 0,
        self_int: 0,
        genus: 0,
    };
    assert_eq!(qhdim_invariants(sys(6, 0, 5, 3), &mut inv), QhStatus::Ok);
    assert_eq!(
        inv,
        QhInvariants {
            v: -3,
            e: -1,
            self_int: -9,
            genus: -5
        }
    );

    let mut r = QhDimension {
        dim: 9,
        v: 9,
        e: 9,
        status: QhDimStatus::Conjectural,
    };
    assert_eq!(qhdim_dimension(sys(6, 0, 5, 3), &mut r), QhStatus::Ok);
    assert_eq!((r.dim, r.status), (0, QhDimStatus::SpecialProved));
    assert!(qhdim_last_error().is_null());
}

#[test]
fn errors_are_reported() {
    unsafe { errors_are_reported_body() }
}

unsafe fn errors_are_reported_body() {
    let mut r = QhDimension {
        dim: 0,
        v: 0,
        e: 0,
        status: QhDimStatus::Conjectural,
    };
    assert_eq!(
        qhdim_dimension(sys(-1, 0, 0, 0), &mut r),
        QhStatus::InvalidArgument
    );
    assert!(last_error().contains("out of range"));
    assert_eq!(
        qhdim_dimension(sys(3, 0, 0, 0), ptr::null_mut()),
        QhStatus::NullPointer
    );
    assert_eq!(
        qhdim_oracle_dim(sys(3, 0, 1, 1), 1, 3, 4, &mut 0),
        QhStatus::InvalidArgument
    );
}

#[test]
fn oracle_measures() {
    unsafe { oracle_measures_body() }
}

unsafe fn oracle_measures_body() {
    let mut dim = 0;
    assert_eq!(
        qhdim_oracle_dim(sys(5, 0, 4, 2), 7, 0, 0, &mut dim),
        QhStatus::Ok
    );
    assert_eq!(dim, 8);
}

#[test]
fn certifier_handle() {
    unsafe { certifier_handle_body() }
}

unsafe fn certifier_handle_body() {
    let mut h = ptr::null_mut();
    assert_eq!(qhdim_certifier_new(0, &mut h), QhStatus::Ok);
    let mut cert = QhCertificate {
        outcome: QhOutcome::Inconclusive,
        dim: 0,
        oracle_assisted: true,
    };
    let mut trace = ptr::null_mut();
    assert_eq!(
        qhdim_certify(h, sys(5, 0, 6, 2), &mut cert, &mut trace),
        QhStatus::Ok
    );
    assert_eq!(
        (cert.outcome, cert.dim, cert.oracle_assisted),
        (QhOutcome::NonSpecialProved, 2, false)
    );
    let text = unsafe { CStr::from_ptr(trace) }
        .to_str()
        .unwrap()
        .to_owned();
    assert!(text.contains("L(5,0,6,2)"), "{text}");
    qhdim_string_free(trace);

    assert_eq!(
        qhdim_certify(h, sys(4, 0, 5, 2), &mut cert, ptr::null_mut()),
        QhStatus::Ok
    );
    assert_eq!((cert.outcome, cert.dim), (QhOutcome::Inconclusive, 0));

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("c.json").to_str().unwrap()).unwrap();
    assert_eq!(qhdim_certifier_save(h, path.as_ptr()), QhStatus::Ok);
    let mut other = ptr::null_mut();
    assert_eq!(qhdim_certifier_new(0, &mut other), QhStatus::Ok);
    let mut loaded = 0;
    assert_eq!(
        qhdim_certifier_load(other, path.as_ptr(), &mut loaded),
        QhStatus::Ok
    );
    assert!(loaded > 0);
    let missing = CString::new(dir.path().join("none.json").to_str().unwrap()).unwrap();
    assert_eq!(
        qhdim_certifier_load(other, missing.as_ptr(), ptr::null_mut()),
        QhStatus::Io
    );
    qhdim_certifier_free(h);
    qhdim_certifier_free(other);
    assert_eq!(
        qhdim_certify(ptr::null(), sys(1, 0, 0, 0), &mut cert, ptr::null_mut()),
        QhStatus::NullPointer
    );
}

#[test]
fn class_list_handle() {
    unsafe { class_list_handle_body() }
}

unsafe fn class_list_handle_body() {
    let mut h = ptr::null_mut();
    assert_eq!(qhdim_class_list_new(7, 0, &mut h), QhStatus::Ok);
    let mut len = 0;
    assert_eq!(qhdim_class_list_len(h, &mut len), QhStatus::Ok);
    let mut c = sys(0, 0, 0, 0);
    let all: Vec<QhSystem> = (0..len)
        .map(|i| {
            assert_eq!(qhdim_class_list_get(h, i, &mut c), QhStatus::Ok);
            c
        })
        .collect();
    assert!(all.contains(&sys(27, 17, 9, 7)));
    assert!(all.contains(&sys(56, 48, 17, 7)));
    assert_eq!(
        qhdim_class_list_get(h, len, &mut c),
        QhStatus::IndexOutOfRange
    );
    qhdim_class_list_free(h);
}

/// The generated header compiles as C.
#[test]
fn header_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/qhdim.h");
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
