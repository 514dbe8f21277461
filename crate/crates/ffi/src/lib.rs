//! C ABI over the `fdnoma` library.
//!
//! Every function returns an [`FdnomaStatus`] and writes results through
//! out-pointers. On a nonzero status, `fdnoma_last_error` describes the
//! failure on the calling thread. Network configurations live behind an
//! opaque handle created by `fdnoma_config_new` and released with
//! `fdnoma_config_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fdnoma::analytics::{self, threshold_coefficients};
use fdnoma::channel::{rician_ccdf, rician_cdf, rician_pdf};
use fdnoma::montecarlo::{mc_ergodic_rates, mc_outage};
use fdnoma::{
    Duplex, Error, IpsicMode, McSettings, Method, NetworkConfig, RicianParams, SeriesControl, SnrPoint, User,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdnomaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidConfig = 3,
    NotConverged = 4,
    DegenerateRate = 5,
    UndefinedSlope = 6,
    Internal = 7,
}

pub const FDNOMA_USER_FAR: u32 = 0;
pub const FDNOMA_USER_NEAR: u32 = 1;

pub const FDNOMA_METHOD_SERIES: u32 = 0;
pub const FDNOMA_METHOD_QUADRATURE: u32 = 1;
pub const FDNOMA_METHOD_ASYMPTOTIC: u32 = 2;

pub const FDNOMA_IPSIC_DETERMINISTIC: u32 = 0;
pub const FDNOMA_IPSIC_EXPONENTIAL: u32 = 1;

/// Plain-data network parameters. Booleans are `0` or nonzero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdnomaParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub kappa_sr: f64,
    pub kappa_li: f64,
    pub kappa_rdf: f64,
    pub kappa_rdn: f64,
    pub epsilon: f64,
    pub full_duplex: u8,
    pub lambda_sr: f64,
    pub lambda_li: f64,
    pub lambda_rdf: f64,
    pub lambda_rdn: f64,
    pub k_factor: f64,
    pub n0: f64,
    pub gamma_thf: f64,
    pub gamma_thn: f64,
    pub hd_prelog_half: u8,
}

impl From<&NetworkConfig> for FdnomaParams {
    fn from(c: &NetworkConfig) -> Self {
        FdnomaParams {
            a1: c.a1,
            a2: c.a2,
            b1: c.b1,
            b2: c.b2,
            kappa_sr: c.kappa_sr,
            kappa_li: c.kappa_li,
            kappa_rdf: c.kappa_rdf,
            kappa_rdn: c.kappa_rdn,
            epsilon: c.epsilon,
            full_duplex: (c.duplex == Duplex::Full) as u8,
            lambda_sr: c.lambda_sr,
            lambda_li: c.lambda_li,
            lambda_rdf: c.lambda_rdf,
            lambda_rdn: c.lambda_rdn,
            k_factor: c.k_factor,
            n0: c.n0,
            gamma_thf: c.gamma_thf,
            gamma_thn: c.gamma_thn,
            hd_prelog_half: c.hd_prelog_half as u8,
        }
    }
}

impl From<&FdnomaParams> for NetworkConfig {
    fn from(p: &FdnomaParams) -> Self {
        NetworkConfig {
            a1: p.a1,
            a2: p.a2,
            b1: p.b1,
            b2: p.b2,
            kappa_sr: p.kappa_sr,
            kappa_li: p.kappa_li,
            kappa_rdf: p.kappa_rdf,
            kappa_rdn: p.kappa_rdn,
            epsilon: p.epsilon,
            duplex: if p.full_duplex != 0 { Duplex::Full } else { Duplex::Half },
            lambda_sr: p.lambda_sr,
            lambda_li: p.lambda_li,
            lambda_rdf: p.lambda_rdf,
            lambda_rdn: p.lambda_rdn,
            k_factor: p.k_factor,
            n0: p.n0,
            gamma_thf: p.gamma_thf,
            gamma_thn: p.gamma_thn,
            hd_prelog_half: p.hd_prelog_half != 0,
        }
    }
}

/// Threshold coefficients; an infeasible coefficient is `+inf`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdnomaThresholds {
    pub xi: f64,
    pub chi: f64,
    pub psi: f64,
    pub phi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdnomaMcOutage {
    pub far: f64,
    pub far_se: f64,
    pub near: f64,
    pub near_se: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdnomaMcRates {
    pub far: f64,
    pub far_se: f64,
    pub near: f64,
    pub near_se: f64,
    pub sum: f64,
    pub sum_se: f64,
    pub near_served: f64,
}

/// Opaque validated configuration.
pub struct FdnomaConfig {
    network: NetworkConfig,
    series: SeriesControl,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FdnomaStatus {
    match e {
        Error::InvalidParameter { .. } => FdnomaStatus::InvalidParameter,
        Error::InvalidConfig(_) => FdnomaStatus::InvalidConfig,
        Error::NotConverged { .. } => FdnomaStatus::NotConverged,
        Error::DegenerateRate(_) => FdnomaStatus::DegenerateRate,
        Error::UndefinedSlope(_) => FdnomaStatus::UndefinedSlope,
        Error::Parse { .. } | Error::Io { .. } => FdnomaStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> FdnomaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FdnomaStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            FdnomaStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            FdnomaStatus::Internal
        }
    }
}

unsafe fn write<T>(out: *mut T, what: &'static str, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn config<'a>(cfg: *const FdnomaConfig) -> Result<&'a FdnomaConfig, Fail> {
    cfg.as_ref().ok_or(Fail::Null("config"))
}

fn user_of(code: u32) -> Result<User, Fail> {
    match code {
        FDNOMA_USER_FAR => Ok(User::Far),
        FDNOMA_USER_NEAR => Ok(User::Near),
        _ => Err(Error::InvalidParameter {
            name: "user",
            reason: format!("unknown code {code}"),
        }
        .into()),
    }
}

fn method_of(code: u32) -> Result<Method, Fail> {
    match code {
        FDNOMA_METHOD_SERIES => Ok(Method::Series),
        FDNOMA_METHOD_QUADRATURE => Ok(Method::Quadrature),
        FDNOMA_METHOD_ASYMPTOTIC => Ok(Method::Asymptotic),
        _ => Err(Error::InvalidParameter {
            name: "method",
            reason: format!("unknown code {code}"),
        }
        .into()),
    }
}

fn mc_settings(trials: u64, seed: u64, ipsic_mode: u32) -> Result<McSettings, Fail> {
    let ipsic_mode = match ipsic_mode {
        FDNOMA_IPSIC_DETERMINISTIC => IpsicMode::Deterministic,
        FDNOMA_IPSIC_EXPONENTIAL => IpsicMode::Exponential,
        _ => {
            return Err(Error::InvalidParameter {
                name: "ipsic_mode",
                reason: format!("unknown code {ipsic_mode}"),
            }
            .into())
        }
    };
    let mc = McSettings {
        trials,
        seed,
        ipsic_mode,
    };
    mc.validate()?;
    Ok(mc)
}

/// Message for the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fdnoma_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Writes the default network parameters.
///
/// # Safety
/// `out` must be null or point to writable memory for one `FdnomaParams`.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_params_default(out: *mut FdnomaParams) -> FdnomaStatus {
    guard(|| write(out, "out", FdnomaParams::from(&NetworkConfig::default())))
}

/// Validates `params` and allocates a configuration handle.
///
/// # Safety
/// `params` must be null or point to a valid `FdnomaParams`; `out` must be
/// null or writable. The handle must be released with `fdnoma_config_free`.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_config_new(params: *const FdnomaParams, out: *mut *mut FdnomaConfig) -> FdnomaStatus {
    guard(|| {
        let p = params.as_ref().ok_or(Fail::Null("params"))?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let network = NetworkConfig::from(p);
        network.validate()?;
        let handle = Box::new(FdnomaConfig {
            network,
            series: SeriesControl::default(),
        });
        write(out, "out", Box::into_raw(handle))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from `fdnoma_config_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_config_free(cfg: *mut FdnomaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Reads back the parameters held by a handle.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_config_params(cfg: *const FdnomaConfig, out: *mut FdnomaParams) -> FdnomaStatus {
    guard(|| write(out, "out", FdnomaParams::from(&config(cfg)?.network)))
}

/// Sets the series truncation used by the series evaluators.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_config_set_series(
    cfg: *mut FdnomaConfig,
    max_terms: usize,
    rel_tol: f64,
) -> FdnomaStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or(Fail::Null("config"))?;
        c.series = SeriesControl::new(max_terms, rel_tol)?;
        Ok(())
    })
}

fn rician(k: f64, mean: f64) -> Result<RicianParams, Fail> {
    Ok(RicianParams::new(k, mean)?)
}

/// Density of a Rician power gain with K-factor `k` and mean `mean` at `x`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_rician_pdf(k: f64, mean: f64, x: f64, out: *mut f64) -> FdnomaStatus {
    guard(|| write(out, "out", rician_pdf(x, rician(k, mean)?)))
}

/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_rician_cdf(k: f64, mean: f64, x: f64, out: *mut f64) -> FdnomaStatus {
    guard(|| write(out, "out", rician_cdf(x, rician(k, mean)?, SeriesControl::default())?))
}

/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_rician_ccdf(k: f64, mean: f64, x: f64, out: *mut f64) -> FdnomaStatus {
    guard(|| write(out, "out", rician_ccdf(x, rician(k, mean)?, SeriesControl::default())?))
}

/// # Safety
/// `cfg` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_thresholds(
    cfg: *const FdnomaConfig,
    gamma: f64,
    gamma_prime: f64,
    out: *mut FdnomaThresholds,
) -> FdnomaStatus {
    guard(|| {
        let c = config(cfg)?;
        let t = threshold_coefficients(&c.network, SnrPoint::new(gamma, gamma_prime)?);
        let inf = |v: Option<f64>| v.unwrap_or(f64::INFINITY);
        write(
            out,
            "out",
            FdnomaThresholds {
                xi: inf(t.xi),
                chi: inf(t.chi),
                psi: inf(t.psi),
                phi: inf(t.phi),
            },
        )
    })
}

/// Outage probability of `user` (`FDNOMA_USER_*`) by `method`
/// (`FDNOMA_METHOD_*`). `converged` may be null.
///
/// # Safety
/// `cfg` must be a live handle; `out` and `converged` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_outage(
    cfg: *const FdnomaConfig,
    gamma: f64,
    gamma_prime: f64,
    user: u32,
    method: u32,
    out: *mut f64,
    converged: *mut u8,
) -> FdnomaStatus {
    guard(|| {
        let c = config(cfg)?;
        let snr = SnrPoint::new(gamma, gamma_prime)?;
        let r = analytics::outage(&c.network, snr, user_of(user)?, method_of(method)?, c.series)?;
        write(out, "out", r.value)?;
        if !converged.is_null() {
            converged.write(r.converged as u8);
        }
        Ok(())
    })
}

/// Monte Carlo outage of both users.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_mc_outage(
    cfg: *const FdnomaConfig,
    gamma: f64,
    gamma_prime: f64,
    trials: u64,
    seed: u64,
    ipsic_mode: u32,
    out: *mut FdnomaMcOutage,
) -> FdnomaStatus {
    guard(|| {
        let c = config(cfg)?;
        let mc = mc_settings(trials, seed, ipsic_mode)?;
        let e = mc_outage(&c.network, SnrPoint::new(gamma, gamma_prime)?, &mc)?;
        write(
            out,
            "out",
            FdnomaMcOutage {
                far: e.far.value,
                far_se: e.far.std_error,
                near: e.near.value,
                near_se: e.near.std_error,
            },
        )
    })
}

/// Monte Carlo ergodic rates in bits/s/Hz.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_mc_rates(
    cfg: *const FdnomaConfig,
    gamma: f64,
    gamma_prime: f64,
    trials: u64,
    seed: u64,
    ipsic_mode: u32,
    out: *mut FdnomaMcRates,
) -> FdnomaStatus {
    guard(|| {
        let c = config(cfg)?;
        let mc = mc_settings(trials, seed, ipsic_mode)?;
        let e = mc_ergodic_rates(&c.network, SnrPoint::new(gamma, gamma_prime)?, &mc)?;
        write(
            out,
            "out",
            FdnomaMcRates {
                far: e.far.value,
                far_se: e.far.std_error,
                near: e.near.value,
                near_se: e.near.std_error,
                sum: e.sum.value,
                sum_se: e.sum.std_error,
                near_served: e.near_served.value,
            },
        )
    })
}

/// High-SNR ergodic rate of `user`.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fdnoma_rate_high_snr(cfg: *const FdnomaConfig, user: u32, out: *mut f64) -> FdnomaStatus {
    guard(|| {
        let c = config(cfg)?;
        let v = match user_of(user)? {
            User::Far => analytics::er_far_high_snr(&c.network, c.series)?,
            User::Near => analytics::er_near_high_snr(&c.network, c.series)?,
        };
        write(out, "out", v)
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fdnoma_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
