use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fdnoma_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fdnoma_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn defaults() -> FdnomaParams {
    let mut p = std::mem::MaybeUninit::<FdnomaParams>::uninit();
    assert_eq!(unsafe { fdnoma_params_default(p.as_mut_ptr()) }, FdnomaStatus::Ok);
    unsafe { p.assume_init() }
}

struct Handle(*mut FdnomaConfig);

impl Handle {
    fn new(p: &FdnomaParams) -> Self {
        let mut h = ptr::null_mut();
        let st = unsafe { fdnoma_config_new(p, &mut h) };
        assert_eq!(st, FdnomaStatus::Ok, "{}", last_error());
        Handle(h)
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { fdnoma_config_free(self.0) }
    }
}

#[test]
fn params_round_trip_through_handle() {
    let p = defaults();
    assert_eq!((p.a1, p.a2, p.full_duplex), (0.7, 0.3, 1));
    let h = Handle::new(&p);
    let mut back = defaults();
    back.a1 = 0.0;
    assert_eq!(unsafe { fdnoma_config_params(h.0, &mut back) }, FdnomaStatus::Ok);
    assert_eq!(back, p);
}

#[test]
fn invalid_params_report_the_violation() {
    let mut p = defaults();
    p.a1 = 0.4;
    p.a2 = 0.6;
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { fdnoma_config_new(&p, &mut h) }, FdnomaStatus::InvalidConfig);
    assert!(h.is_null());
    assert!(last_error().contains("a1 > a2 violated"), "{}", last_error());
}

#[test]
fn null_pointers_are_rejected() {
    assert_eq!(
        unsafe { fdnoma_params_default(ptr::null_mut()) },
        FdnomaStatus::NullPointer
    );
    assert!(last_error().contains("null"));
    let mut v = 0.0;
    let st = unsafe {
        fdnoma_outage(
            ptr::null(),
            10.0,
            10.0,
            FDNOMA_USER_FAR,
            FDNOMA_METHOD_SERIES,
            &mut v,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, FdnomaStatus::NullPointer);
    unsafe { fdnoma_config_free(ptr::null_mut()) };
}

#[test]
fn fading_law_calls() {
    let (mut pdf, mut cdf, mut ccdf) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(fdnoma_rician_pdf(0.0, 2.0, 1.0, &mut pdf), FdnomaStatus::Ok);
        assert_eq!(fdnoma_rician_cdf(1.0, 8.0, 8.0, &mut cdf), FdnomaStatus::Ok);
        assert_eq!(fdnoma_rician_ccdf(1.0, 8.0, 8.0, &mut ccdf), FdnomaStatus::Ok);
    }
    assert!((pdf - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
    assert!((cdf + ccdf - 1.0).abs() < 1e-12);
    assert_eq!(
        unsafe { fdnoma_rician_pdf(-1.0, 2.0, 1.0, &mut pdf) },
        FdnomaStatus::InvalidParameter
    );
    assert!(last_error().contains("k_factor"), "{}", last_error());
}

#[test]
fn outage_methods_agree_and_match_library() {
    let mut p = defaults();
    p.full_duplex = 0;
    p.k_factor = 0.0;
    p.kappa_sr = 0.0;
    p.kappa_li = 0.0;
    p.kappa_rdf = 0.0;
    p.kappa_rdn = 0.0;
    p.epsilon = 0.0;
    let h = Handle::new(&p);
    let mut t = FdnomaThresholds {
        xi: 0.0,
        chi: 0.0,
        psi: 0.0,
        phi: 0.0,
    };
    assert_eq!(unsafe { fdnoma_thresholds(h.0, 10.0, 10.0, &mut t) }, FdnomaStatus::Ok);
    let far_exact = 1.0 - (-t.xi / 8.0 - t.psi / 8.0).exp();
    for method in [FDNOMA_METHOD_SERIES, FDNOMA_METHOD_QUADRATURE] {
        let (mut v, mut conv) = (0.0, 0u8);
        let st = unsafe { fdnoma_outage(h.0, 10.0, 10.0, FDNOMA_USER_FAR, method, &mut v, &mut conv) };
        assert_eq!(st, FdnomaStatus::Ok);
        assert_eq!(conv, 1);
        assert!((v - far_exact).abs() < 1e-10, "method {method}: {v} vs {far_exact}");
    }
    let mut v = 0.0;
    let st = unsafe { fdnoma_outage(h.0, 10.0, 10.0, 9, FDNOMA_METHOD_SERIES, &mut v, ptr::null_mut()) };
    assert_eq!(st, FdnomaStatus::InvalidParameter);
}

#[test]
fn infeasible_thresholds_are_infinite() {
    let mut p = defaults();
    p.gamma_thn = 1e6;
    let h = Handle::new(&p);
    let mut t = FdnomaThresholds {
        xi: 0.0,
        chi: 0.0,
        psi: 0.0,
        phi: 0.0,
    };
    assert_eq!(
        unsafe { fdnoma_thresholds(h.0, 100.0, 100.0, &mut t) },
        FdnomaStatus::Ok
    );
    assert!(t.xi.is_infinite());
    let mut v = 0.0;
    let st = unsafe {
        fdnoma_outage(
            h.0,
            100.0,
            100.0,
            FDNOMA_USER_NEAR,
            FDNOMA_METHOD_QUADRATURE,
            &mut v,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, FdnomaStatus::Ok);
    assert_eq!(v, 1.0);
}

#[test]
fn monte_carlo_is_seeded() {
    let h = Handle::new(&defaults());
    let blank = FdnomaMcOutage {
        far: 0.0,
        far_se: 0.0,
        near: 0.0,
        near_se: 0.0,
    };
    let (mut a, mut b) = (blank, blank);
    unsafe {
        assert_eq!(
            fdnoma_mc_outage(h.0, 10.0, 10.0, 50_000, 7, FDNOMA_IPSIC_DETERMINISTIC, &mut a),
            FdnomaStatus::Ok
        );
        assert_eq!(
            fdnoma_mc_outage(h.0, 10.0, 10.0, 50_000, 7, FDNOMA_IPSIC_DETERMINISTIC, &mut b),
            FdnomaStatus::Ok
        );
    }
    assert_eq!(a, b);
    assert!(a.far <= a.near);
    let mut q = 0.0;
    unsafe {
        fdnoma_outage(
            h.0,
            10.0,
            10.0,
            FDNOMA_USER_FAR,
            FDNOMA_METHOD_QUADRATURE,
            &mut q,
            ptr::null_mut(),
        )
    };
    assert!((a.far - q).abs() < 4.0 * (q * (1.0 - q) / 50_000.0).sqrt());
    let st = unsafe { fdnoma_mc_outage(h.0, 10.0, 10.0, 0, 7, FDNOMA_IPSIC_DETERMINISTIC, &mut a) };
    assert_ne!(st, FdnomaStatus::Ok);
}

#[test]
fn rates() {
    let h = Handle::new(&defaults());
    let mut r = FdnomaMcRates {
        far: 0.0,
        far_se: 0.0,
        near: 0.0,
        near_se: 0.0,
        sum: 0.0,
        sum_se: 0.0,
        near_served: 0.0,
    };
    assert_eq!(
        unsafe { fdnoma_mc_rates(h.0, 100.0, 100.0, 20_000, 1, FDNOMA_IPSIC_EXPONENTIAL, &mut r) },
        FdnomaStatus::Ok
    );
    assert!((r.far + r.near - r.sum).abs() < 1e-9);
    let (mut far, mut near) = (0.0, 0.0);
    unsafe {
        assert_eq!(fdnoma_rate_high_snr(h.0, FDNOMA_USER_FAR, &mut far), FdnomaStatus::Ok);
        assert_eq!(fdnoma_rate_high_snr(h.0, FDNOMA_USER_NEAR, &mut near), FdnomaStatus::Ok);
    }
    assert!(far > 0.0 && near > 0.0);

    let mut p = defaults();
    p.full_duplex = 0;
    p.kappa_sr = 0.0;
    p.kappa_rdf = 0.0;
    p.kappa_rdn = 0.0;
    p.epsilon = 0.0;
    let ideal = Handle::new(&p);
    let st = unsafe { fdnoma_rate_high_snr(ideal.0, FDNOMA_USER_NEAR, &mut near) };
    assert_eq!(st, FdnomaStatus::DegenerateRate);
}

#[test]
fn series_control_is_validated() {
    let h = Handle::new(&defaults());
    assert_eq!(unsafe { fdnoma_config_set_series(h.0, 300, 1e-13) }, FdnomaStatus::Ok);
    assert_ne!(unsafe { fdnoma_config_set_series(h.0, 0, 1e-13) }, FdnomaStatus::Ok);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fdnoma_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("fdnoma.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header_path()).expect("generated header");
    for name in [
        "fdnoma_last_error",
        "fdnoma_params_default",
        "fdnoma_config_new",
        "fdnoma_config_free",
        "fdnoma_config_params",
        "fdnoma_config_set_series",
        "fdnoma_rician_pdf",
        "fdnoma_rician_cdf",
        "fdnoma_rician_ccdf",
        "fdnoma_thresholds",
        "fdnoma_outage",
        "fdnoma_mc_outage",
        "fdnoma_mc_rates",
        "fdnoma_rate_high_snr",
        "fdnoma_version",
        "typedef struct FdnomaConfig FdnomaConfig",
        "FDNOMA_STATUS_OK = 0",
        "FDNOMA_USER_NEAR 1",
        "FDNOMA_METHOD_ASYMPTOTIC 2",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(header_path())
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
