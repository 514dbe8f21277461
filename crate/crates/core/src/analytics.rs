//! Outage probabilities, their high-SNR forms, diversity order and high-SNR
//! ergodic rates.
//!
//! Both users share the relay decoding event: the relay recovers both symbols
//! iff `rho_sr > xi + chi * rho_li`. The far user additionally needs
//! `rho_rdf > psi`, the near user `rho_rdn > phi`. Each outage probability is
//! therefore `1 - Pr(destination leg) * Pr(relay leg)` and is evaluated three
//! ways:
//!
//! * `series`: the closed-form multiple sum obtained by expanding both Rician
//!   laws as Poisson(K) mixtures and integrating term by term;
//! * `quadrature`: adaptive integration of `f_li(y) * Pr(rho_sr > chi y + xi)`
//!   over the loop-interference gain;
//! * `asymptotic`: the first-order high-SNR expansion.

use crate::channel::{distribution_sum, rician_pdf, RicianParams, SeriesControl};
use crate::error::{Error, Result};
use crate::quadrature::Quadrature;
use crate::special::{ln_binomial, ln_factorial, ln_pow};
use crate::system_model::{Duplex, Link, NetworkConfig, SnrPoint, User};

/// Threshold coefficients of the outage events. `None` marks a coefficient
/// whose defining denominator is not positive, i.e. the target SINR exceeds
/// the ceiling the power split and impairments allow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdCoefficients {
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub xi: Option<f64>,
    pub chi: Option<f64>,
    pub psi: Option<f64>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub phi: Option<f64>,
}

impl ThresholdCoefficients {
    /// `(xi, chi)` of the relay decoding event, if achievable.
    pub fn relay(&self) -> Option<(f64, f64)> {
        Some((self.xi?, self.chi?))
    }

    /// Threshold on the destination gain for `user`.
    pub fn destination(&self, user: User) -> Option<f64> {
        match user {
            User::Far => self.psi,
            User::Near => self.phi,
        }
    }
}

fn ratio(threshold: f64, denominator: f64) -> Option<f64> {
    (denominator > 0.0).then(|| threshold / denominator)
}

fn max_feasible(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a?.max(b?))
}

pub fn threshold_coefficients(cfg: &NetworkConfig, snr: SnrPoint) -> ThresholdCoefficients {
    let (g, gp) = (snr.gamma, snr.gamma_prime);
    let (thf, thn) = (cfg.gamma_thf, cfg.gamma_thn);
    let ksr2 = cfg.kappa_sr * cfg.kappa_sr;
    let krdf2 = cfg.kappa_rdf * cfg.kappa_rdf;
    let krdn2 = cfg.kappa_rdn * cfg.kappa_rdn;
    let eps = cfg.epsilon;

    let xi1 = ratio(thf, cfg.a1 * g - (cfg.a2 + ksr2) * g * thf);
    let xi2 = ratio(thn, cfg.a2 * g - (cfg.a1 * eps + ksr2) * g * thn);
    let xi = max_feasible(xi1, xi2);
    let w = cfg.duplex.switch();
    let chi = xi.map(|xi| w * w * gp * (ksr2 + 1.0) * xi);
    let psi = ratio(thf, cfg.b1 * gp - (cfg.b2 + krdf2) * gp * thf);
    let phi1 = ratio(thf, cfg.b1 * gp - (cfg.b2 + krdn2) * gp * thf);
    let phi2 = ratio(thn, cfg.b2 * gp - (eps * cfg.b1 + krdn2) * gp * thn);
    let phi = max_feasible(phi1, phi2);

    ThresholdCoefficients {
        xi1,
        xi2,
        xi,
        chi,
        psi,
        phi1,
        phi2,
        phi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    Quadrature,
    Asymptotic,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub value: f64,
    pub method: Method,
    /// Terms consumed per outer series index (empty for quadrature).
    pub terms_used: Vec<usize>,
    pub converged: bool,
}

impl OutageResult {
    fn certain(method: Method) -> Self {
        OutageResult {
            value: 1.0,
            method,
            terms_used: Vec::new(),
            converged: true,
        }
    }
}

/// Which channel-gain argument the relay factor's exponential carries in the
/// near-user series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SrExponent {
    Xi,
    Chi,
}

/// Line-of-sight attenuation of the near-user series: `e^{-3K}` (one `e^{-K}`
/// per Rician law in the expansion) or a single `e^{-K}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LosAttenuation {
    PerLaw,
    Single,
}

/// Closed-form variant used for the near-user series. The published form
/// carries `chi` and a single `e^{-K}` in its exponential; the form derived
/// the same way as the far-user series carries `xi` and `e^{-3K}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NearSeriesForm {
    pub sr_exponent: SrExponent,
    pub los: LosAttenuation,
}

impl NearSeriesForm {
    pub const DERIVED: NearSeriesForm = NearSeriesForm {
        sr_exponent: SrExponent::Xi,
        los: LosAttenuation::PerLaw,
    };
    pub const AS_PUBLISHED: NearSeriesForm = NearSeriesForm {
        sr_exponent: SrExponent::Chi,
        los: LosAttenuation::Single,
    };

    pub fn all() -> [NearSeriesForm; 4] {
        [
            Self::DERIVED,
            Self::AS_PUBLISHED,
            NearSeriesForm {
                sr_exponent: SrExponent::Xi,
                los: LosAttenuation::Single,
            },
            NearSeriesForm {
                sr_exponent: SrExponent::Chi,
                los: LosAttenuation::PerLaw,
            },
        ]
    }

    pub fn label(self) -> &'static str {
        match (self.sr_exponent, self.los) {
            (SrExponent::Xi, LosAttenuation::PerLaw) => "xi-exponent/e^-3K",
            (SrExponent::Chi, LosAttenuation::Single) => "chi-exponent/e^-K (as published)",
            (SrExponent::Xi, LosAttenuation::Single) => "xi-exponent/e^-K",
            (SrExponent::Chi, LosAttenuation::PerLaw) => "chi-exponent/e^-3K",
        }
    }
}

impl Default for NearSeriesForm {
    fn default() -> Self {
        Self::DERIVED
    }
}

struct PartialSum {
    value: f64,
    terms: Vec<usize>,
    converged: bool,
}

/// Relay-leg factor of the closed-form sum, indices `l1` (loop-interference
/// law), `l2` (source-relay law), `m1 <= l2`, `u <= m1`:
///
/// `sum C(m1,u) K^{l1+l2} (u+l1)! chi^u lambda_li^u xi^{m1-u}
///   lambda_sr^{l1+u-m1+1} (lambda_sr + lambda_li chi)^{-(l1+u+1)}
///   (K+1)^{m1-u} / (m1! (l1!)^2 l2!) * e^{prefactor}`.
///
/// Every term is formed in log space so that large factorials and tiny `xi`
/// powers never overflow or underflow prematurely.
#[allow(clippy::too_many_arguments)]
fn relay_factor(
    k: f64,
    lambda_sr: f64,
    lambda_li: f64,
    xi: f64,
    chi: f64,
    ln_prefactor: f64,
    s: SeriesControl,
    fault: f64,
) -> PartialSum {
    let ln_k1 = (k + 1.0).ln();
    let ln_lsr = lambda_sr.ln();
    let ln_c = (lambda_sr + lambda_li * chi).ln();
    let ln_xi = xi.ln();
    let max = s.max_terms();

    let mut total = 0.0;
    let mut l1_used = 0;
    let mut l2_used = 0;
    let mut converged = true;
    let mut outer_done = false;
    for l1 in 0..max {
        let mut block1 = 0.0;
        let mut inner_done = false;
        for l2 in 0..max {
            let mut block2 = 0.0;
            let base = ln_pow(k, (l1 + l2) as f64) - 2.0 * ln_factorial(l1) - ln_factorial(l2) + ln_prefactor;
            for m1 in 0..=l2 {
                let base_m = base - ln_factorial(m1);
                let u_max = if chi > 0.0 { m1 } else { 0 };
                for u in 0..=u_max {
                    let ln_term = base_m
                        + ln_binomial(m1, u)
                        + ln_factorial(u + l1)
                        + ln_pow(chi * lambda_li, u as f64)
                        + (m1 - u) as f64 * (ln_xi + ln_k1)
                        + (l1 + u + 1) as f64 * ln_lsr
                        - m1 as f64 * ln_lsr
                        - (l1 + u + 1) as f64 * ln_c;
                    let mut term = ln_term.exp();
                    if l1 == 0 && l2 == 0 {
                        term *= 1.0 + fault;
                    }
                    block2 += term;
                }
            }
            block1 += block2;
            l2_used = l2_used.max(l2 + 1);
            if s.should_stop(l2 + 1, k, block2, block1) {
                inner_done = true;
                break;
            }
        }
        converged &= inner_done;
        total += block1;
        l1_used = l1 + 1;
        if s.should_stop(l1 + 1, k, block1, total) {
            outer_done = true;
            break;
        }
    }
    PartialSum {
        value: total,
        terms: vec![l1_used, l2_used],
        converged: converged && outer_done,
    }
}

/// Destination-leg factor: `sum_{l} sum_{m<=l} K^l / (l! m!)
/// ((K+1) threshold / lambda)^m * e^{prefactor}`.
fn destination_factor(k: f64, lambda: f64, threshold: f64, ln_prefactor: f64, s: SeriesControl) -> PartialSum {
    let ln_arg = ((k + 1.0) * threshold / lambda).ln();
    let mut total = 0.0;
    for l in 0..s.max_terms() {
        let base = ln_pow(k, l as f64) - ln_factorial(l) + ln_prefactor;
        let block: f64 = (0..=l)
            .map(|m| (base - ln_factorial(m) + ln_pow_arg(ln_arg, m)).exp())
            .sum();
        total += block;
        if s.should_stop(l + 1, k, block, total) {
            return PartialSum {
                value: total,
                terms: vec![l + 1],
                converged: true,
            };
        }
    }
    PartialSum {
        value: total,
        terms: vec![s.max_terms()],
        converged: false,
    }
}

fn ln_pow_arg(ln_base: f64, exponent: usize) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        exponent as f64 * ln_base
    }
}

fn series_result(relay: PartialSum, dest: PartialSum) -> OutageResult {
    let mut terms = relay.terms;
    terms.extend(dest.terms);
    OutageResult {
        value: (1.0 - relay.value * dest.value).clamp(0.0, 1.0),
        method: Method::Series,
        terms_used: terms,
        converged: relay.converged && dest.converged,
    }
}

fn far_series(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl, fault: f64) -> Result<OutageResult> {
    cfg.validate()?;
    let c = threshold_coefficients(cfg, snr);
    let (Some((xi, chi)), Some(psi)) = (c.relay(), c.psi) else {
        return Ok(OutageResult::certain(Method::Series));
    };
    let k = cfg.k_factor;
    // the six-fold sum factorizes into a relay part (l1, l2, m1, u) and a
    // destination part (l3, m2); e^{-3K} splits as e^{-2K} * e^{-K}
    let relay = relay_factor(
        k,
        cfg.lambda_sr,
        cfg.lambda_li,
        xi,
        chi,
        -2.0 * k - (k + 1.0) * xi / cfg.lambda_sr,
        s,
        fault,
    );
    let dest = destination_factor(k, cfg.lambda_rdf, psi, -k - (k + 1.0) * psi / cfg.lambda_rdf, s);
    Ok(series_result(relay, dest))
}

/// Far-user outage probability from the closed-form series.
pub fn op_far_series(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl) -> Result<OutageResult> {
    far_series(cfg, snr, s, 0.0)
}

/// Far-user series with the leading term scaled by `1 + fault`. Exists only to
/// check that the cross-validation catches a corrupted term.
#[doc(hidden)]
pub fn op_far_series_with_fault(
    cfg: &NetworkConfig,
    snr: SnrPoint,
    s: SeriesControl,
    fault: f64,
) -> Result<OutageResult> {
    far_series(cfg, snr, s, fault)
}

/// Near-user outage probability from the closed-form series, in the
/// [`NearSeriesForm::DERIVED`] form.
pub fn op_near_series(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl) -> Result<OutageResult> {
    op_near_series_with_form(cfg, snr, s, NearSeriesForm::default())
}

pub fn op_near_series_with_form(
    cfg: &NetworkConfig,
    snr: SnrPoint,
    s: SeriesControl,
    form: NearSeriesForm,
) -> Result<OutageResult> {
    cfg.validate()?;
    let c = threshold_coefficients(cfg, snr);
    let (Some((xi, chi)), Some(phi)) = (c.relay(), c.phi) else {
        return Ok(OutageResult::certain(Method::Series));
    };
    let k = cfg.k_factor;
    let sr_arg = match form.sr_exponent {
        SrExponent::Xi => xi,
        SrExponent::Chi => chi,
    };
    let relay_los = match form.los {
        LosAttenuation::PerLaw => 2.0 * k,
        LosAttenuation::Single => 0.0,
    };
    let relay = relay_factor(
        k,
        cfg.lambda_sr,
        cfg.lambda_li,
        xi,
        chi,
        -relay_los - (k + 1.0) * sr_arg / cfg.lambda_sr,
        s,
        0.0,
    );
    let dest = destination_factor(k, cfg.lambda_rdn, phi, -k - (k + 1.0) * phi / cfg.lambda_rdn, s);
    Ok(series_result(relay, dest))
}

fn oracle_series() -> SeriesControl {
    SeriesControl::new(400, 1e-15).expect("static control")
}

/// `Pr(rho_sr > xi + chi * rho_li)` by adaptive quadrature over `rho_li`.
fn relay_success_quadrature(cfg: &NetworkConfig, xi: f64, chi: f64) -> Result<(f64, bool)> {
    let sr = cfg.link(Link::SourceRelay)?;
    let li = cfg.link(Link::LoopInterference)?;
    let s = oracle_series();
    let all_converged = std::cell::Cell::new(true);
    let integrand = |y: f64| {
        let density = rician_pdf(y, li);
        if density == 0.0 {
            return 0.0;
        }
        let tail = distribution_sum(chi * y + xi, sr, s);
        if !tail.ccdf_converged {
            all_converged.set(false);
        }
        density * tail.ccdf
    };
    let r = Quadrature::default().integrate_to_infinity(integrand, 0.0, li.mean_gain());
    Ok((r.value, r.converged && all_converged.get()))
}

fn quadrature_outage(cfg: &NetworkConfig, snr: SnrPoint, user: User) -> Result<OutageResult> {
    cfg.validate()?;
    let c = threshold_coefficients(cfg, snr);
    let (Some((xi, chi)), Some(threshold)) = (c.relay(), c.destination(user)) else {
        return Ok(OutageResult::certain(Method::Quadrature));
    };
    let dest_link = match user {
        User::Far => Link::RelayFar,
        User::Near => Link::RelayNear,
    };
    let dest = distribution_sum(threshold, cfg.link(dest_link)?, oracle_series());
    let (relay, relay_ok) = relay_success_quadrature(cfg, xi, chi)?;
    Ok(OutageResult {
        value: (1.0 - dest.ccdf * relay).clamp(0.0, 1.0),
        method: Method::Quadrature,
        terms_used: Vec::new(),
        converged: relay_ok && dest.ccdf_converged,
    })
}

pub fn op_far_quadrature(cfg: &NetworkConfig, snr: SnrPoint) -> Result<OutageResult> {
    quadrature_outage(cfg, snr, User::Far)
}

pub fn op_near_quadrature(cfg: &NetworkConfig, snr: SnrPoint) -> Result<OutageResult> {
    quadrature_outage(cfg, snr, User::Near)
}

fn asymptotic_outage(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl, user: User) -> Result<OutageResult> {
    cfg.validate()?;
    let c = threshold_coefficients(cfg, snr);
    let (Some((xi, chi)), Some(threshold)) = (c.relay(), c.destination(user)) else {
        return Ok(OutageResult::certain(Method::Asymptotic));
    };
    let lambda_dest = match user {
        User::Far => cfg.lambda_rdf,
        User::Near => cfg.lambda_rdn,
    };
    let k = cfg.k_factor;
    let mut sum = 0.0;
    let mut terms = 0;
    let mut converged = false;
    while terms < s.max_terms() {
        let l = terms;
        let weight = (ln_pow(k, l as f64) - 2.0 * k - ln_factorial(l)).exp() / cfg.lambda_sr;
        let term = weight * (cfg.lambda_li * chi * (l + 1) as f64 + (k + 1.0) * xi);
        sum += term;
        terms += 1;
        if s.should_stop(terms, k, term, sum) {
            converged = true;
            break;
        }
    }
    let dest = 1.0 - (-k).exp() * (k + 1.0) * threshold / lambda_dest;
    Ok(OutageResult {
        value: (1.0 - dest * (1.0 - sum)).clamp(0.0, 1.0),
        method: Method::Asymptotic,
        terms_used: vec![terms],
        converged,
    })
}

/// First-order high-SNR outage of the far user.
pub fn op_far_asymptotic(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl) -> Result<OutageResult> {
    asymptotic_outage(cfg, snr, s, User::Far)
}

pub fn op_near_asymptotic(cfg: &NetworkConfig, snr: SnrPoint, s: SeriesControl) -> Result<OutageResult> {
    asymptotic_outage(cfg, snr, s, User::Near)
}

/// Dispatches to the evaluator for `(user, method)`.
pub fn outage(
    cfg: &NetworkConfig,
    snr: SnrPoint,
    user: User,
    method: Method,
    s: SeriesControl,
) -> Result<OutageResult> {
    match (user, method) {
        (User::Far, Method::Series) => op_far_series(cfg, snr, s),
        (User::Near, Method::Series) => op_near_series(cfg, snr, s),
        (User::Far, Method::Quadrature) => op_far_quadrature(cfg, snr),
        (User::Near, Method::Quadrature) => op_near_quadrature(cfg, snr),
        (User::Far, Method::Asymptotic) => op_far_asymptotic(cfg, snr, s),
        (User::Near, Method::Asymptotic) => op_near_asymptotic(cfg, snr, s),
    }
}

/// Negated slope of `ln(OP)` against `ln(SNR)` through the two highest-SNR
/// points of `curve` (pairs of linear SNR and OP).
// the negated comparisons also reject NaN
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn diversity_order_estimate(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(Error::UndefinedSlope("need at least two points".into()));
    }
    if curve.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::UndefinedSlope("SNR must be strictly increasing".into()));
    }
    if let Some(&(snr, op)) = curve
        .iter()
        .find(|(snr, op)| !(*op > 0.0 && *op <= 1.0) || !(*snr > 0.0))
    {
        return Err(Error::UndefinedSlope(format!(
            "point ({snr}, {op}) has OP outside (0, 1] or SNR <= 0"
        )));
    }
    let (s1, p1) = curve[curve.len() - 2];
    let (s2, p2) = curve[curve.len() - 1];
    Ok(-(p2.ln() - p1.ln()) / (s2.ln() - s1.ln()))
}

/// `lambda e^{-K} sum_l (l+1) K^l / ((K+1) l!)`, the mean-gain series of the
/// high-SNR rate expressions. It sums to `lambda` exactly.
pub fn mean_gain_series(k: f64, lambda: f64, s: SeriesControl) -> Result<f64> {
    RicianParams::new(k, lambda)?;
    let mut sum = 0.0;
    for l in 0..s.max_terms() {
        let term = ((l as f64 + 1.0).ln() + ln_pow(k, l as f64) - ln_factorial(l) - k - (k + 1.0).ln()).exp();
        sum += term;
        if s.should_stop(l + 1, k, term, sum) {
            return Ok(lambda * sum);
        }
    }
    Err(Error::NotConverged {
        partial: lambda * sum,
        terms: s.max_terms(),
    })
}

fn hd_prelog(cfg: &NetworkConfig) -> f64 {
    if cfg.duplex == Duplex::Half && cfg.hd_prelog_half {
        0.5
    } else {
        1.0
    }
}

/// `a / b` with `a > 0`, mapping a zero denominator to `+inf`.
fn ceiling(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// High-SNR ergodic rate of the far user, bits/s/Hz.
pub fn er_far_high_snr(cfg: &NetworkConfig, s: SeriesControl) -> Result<f64> {
    cfg.validate()?;
    let psi_sr = mean_gain_series(cfg.k_factor, cfg.lambda_sr, s)?;
    let psi_li = mean_gain_series(cfg.k_factor, cfg.lambda_li, s)?;
    let ksr2 = cfg.kappa_sr * cfg.kappa_sr;
    let w = cfg.duplex.switch();
    let dest = cfg.b1 / (cfg.b2 + cfg.kappa_rdf * cfg.kappa_rdf);
    let relay = cfg.a1 * psi_sr / ((cfg.a2 + ksr2) * psi_sr + psi_li * w * w * (1.0 + ksr2));
    Ok(hd_prelog(cfg) * (1.0 + dest.min(relay)).log2())
}

/// High-SNR ergodic rate of the near user, bits/s/Hz. The leading 1/2 is the
/// channel-ordering probability and applies in both duplex modes.
///
/// With perfect SIC and ideal hardware one ceiling is unbounded and the other
/// is used; when both are unbounded the rate is undefined.
pub fn er_near_high_snr(cfg: &NetworkConfig, s: SeriesControl) -> Result<f64> {
    cfg.validate()?;
    let psi_sr = mean_gain_series(cfg.k_factor, cfg.lambda_sr, s)?;
    let psi_li = mean_gain_series(cfg.k_factor, cfg.lambda_li, s)?;
    let ksr2 = cfg.kappa_sr * cfg.kappa_sr;
    let w = cfg.duplex.switch();
    let dest = ceiling(cfg.b2, cfg.kappa_rdn * cfg.kappa_rdn + cfg.epsilon * cfg.b1);
    let relay = ceiling(
        cfg.a2 * psi_sr,
        psi_sr * (ksr2 + cfg.epsilon * cfg.a1) + psi_li * w * w * (1.0 + ksr2),
    );
    let arg = dest.min(relay);
    if arg.is_infinite() {
        return Err(Error::DegenerateRate(
            "near-user ceiling is unbounded with ideal hardware and perfect SIC",
        ));
    }
    Ok(hd_prelog(cfg) * 0.5 * (1.0 + arg).log2())
}

pub fn esr_high_snr(cfg: &NetworkConfig, s: SeriesControl) -> Result<f64> {
    Ok(er_far_high_snr(cfg, s)? + er_near_high_snr(cfg, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn section4() -> NetworkConfig {
        NetworkConfig::default()
    }

    fn rayleigh_hd_ideal() -> NetworkConfig {
        NetworkConfig {
            k_factor: 0.0,
            duplex: Duplex::Half,
            ..section4().ideal()
        }
    }

    fn snr10() -> SnrPoint {
        SnrPoint::joint(10.0).unwrap()
    }

    #[test]
    fn coefficients_hand_values() {
        let c = threshold_coefficients(&rayleigh_hd_ideal(), snr10());
        let close = |a: Option<f64>, b: f64| (a.unwrap() - b).abs() < 1e-14;
        assert!(close(c.xi1, 0.25));
        assert!(close(c.xi2, 1.0));
        assert!(close(c.xi, 1.0));
        assert!(close(c.psi, 0.25));
        assert!(close(c.phi1, 0.25));
        assert!(close(c.phi2, 1.0));
        assert!(close(c.phi, 1.0));
        assert_eq!(c.chi, Some(0.0));
    }

    #[test]
    fn coefficients_infeasible_threshold() {
        // a1 / (a2 + kappa^2) = 0.7 / 0.3025 < 2.5
        let cfg = NetworkConfig {
            gamma_thf: 2.5,
            ..section4()
        };
        let c = threshold_coefficients(&cfg, snr10());
        assert_eq!(c.xi1, None);
        assert_eq!(c.xi, None);
        assert_eq!(c.chi, None);
        assert_eq!(c.psi, None);
    }

    #[test]
    fn full_duplex_chi() {
        let c = threshold_coefficients(&section4(), snr10());
        let xi = c.xi.unwrap();
        assert!((c.chi.unwrap() - 10.0 * 1.0025 * xi).abs() < 1e-12);
    }

    #[test]
    fn series_infeasible_is_certain_outage() {
        let cfg = NetworkConfig {
            gamma_thf: 3.0,
            ..section4().ideal()
        };
        let s = SeriesControl::default();
        for r in [
            op_far_series(&cfg, snr10(), s).unwrap(),
            op_near_series(&cfg, snr10(), s).unwrap(),
            op_far_quadrature(&cfg, snr10()).unwrap(),
            op_near_quadrature(&cfg, snr10()).unwrap(),
            op_far_asymptotic(&cfg, snr10(), s).unwrap(),
        ] {
            assert_eq!(r.value, 1.0);
            assert!(r.converged);
        }
    }

    #[test]
    fn rayleigh_half_duplex_closed_forms() {
        let cfg = rayleigh_hd_ideal();
        let s = SeriesControl::default();
        let far = 1.0 - (-1.0f64 / 8.0 - 0.25 / 8.0).exp();
        let near = 1.0 - (-1.0f64 / 8.0 - 1.0).exp();
        assert!((far - 0.1447).abs() < 1e-4);
        assert!((near - 0.6753).abs() < 1e-4);
        assert!((op_far_series(&cfg, snr10(), s).unwrap().value - far).abs() < 1e-12);
        assert!((op_near_series(&cfg, snr10(), s).unwrap().value - near).abs() < 1e-12);
        assert!((op_far_quadrature(&cfg, snr10()).unwrap().value - far).abs() < 1e-10);
        assert!((op_near_quadrature(&cfg, snr10()).unwrap().value - near).abs() < 1e-10);
    }

    #[test]
    fn near_eps_beyond_sic_ceiling_is_certain() {
        // b2 < eps * b1 * gamma_thn makes phi2 infeasible
        let cfg = NetworkConfig {
            epsilon: 0.2,
            ..section4()
        };
        let c = threshold_coefficients(&cfg, snr10());
        assert_eq!(c.phi2, None);
        let r = op_near_series(&cfg, snr10(), SeriesControl::default()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn diversity_synthetic_slopes() {
        let one: Vec<_> = [10.0, 100.0, 1000.0].iter().map(|&s| (s, 0.3 / s)).collect();
        assert!((diversity_order_estimate(&one).unwrap() - 1.0).abs() < 1e-9);
        let two: Vec<_> = [10.0, 100.0].iter().map(|&s| (s, 0.3 / (s * s))).collect();
        assert!((diversity_order_estimate(&two).unwrap() - 2.0).abs() < 1e-9);
        assert!(diversity_order_estimate(&[(1.0, 0.5), (10.0, 0.0)]).is_err());
        assert!(diversity_order_estimate(&[(1.0, 0.5)]).is_err());
        assert!(diversity_order_estimate(&[(10.0, 0.5), (1.0, 0.4)]).is_err());
    }

    #[test]
    fn mean_gain_series_identity() {
        let s = SeriesControl::default();
        assert_eq!(mean_gain_series(0.0, 8.0, s).unwrap(), 8.0);
        assert!((mean_gain_series(1.0, 8.0, s).unwrap() - 8.0).abs() < 8e-9);
        assert!((mean_gain_series(5.0, 0.5, s).unwrap() - 0.5).abs() < 5e-10);
    }

    #[test]
    fn high_snr_rates_hand_values() {
        let s = SeriesControl::default();
        let hd = NetworkConfig {
            duplex: Duplex::Half,
            hd_prelog_half: false,
            ..section4().ideal()
        };
        let v = er_far_high_snr(&hd, s).unwrap();
        assert!((v - (10.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!((v - 1.7370).abs() < 1e-4);

        let fd = NetworkConfig {
            k_factor: 0.0,
            ..section4().ideal()
        };
        let v = er_far_high_snr(&fd, s).unwrap();
        assert!((v - (1.0 + 5.6f64 / 2.9).log2()).abs() < 1e-12);
        assert!((v - 1.5515).abs() < 1e-4);

        let hd_eps = NetworkConfig {
            epsilon: 0.01,
            ..hd.clone()
        };
        let v = er_near_high_snr(&hd_eps, s).unwrap();
        assert!((v - 0.5 * (1.0 + 0.3f64 / 0.007).log2()).abs() < 1e-12);
        assert!((v - 2.7276).abs() < 5e-4);

        let fd_eps = NetworkConfig { epsilon: 0.01, ..fd };
        let v = er_near_high_snr(&fd_eps, s).unwrap();
        assert!((v - 0.5 * (1.0 + 2.4f64 / 0.556).log2()).abs() < 1e-12);
        // quoted figure 1.2042 is a rounding slip for 1.20524
        assert!((v - 1.2042).abs() < 2e-3);

        let sum = esr_high_snr(&fd_eps, s).unwrap();
        assert!((sum - (1.0 + 5.6f64 / 2.9).log2() - v).abs() < 1e-12);
    }

    #[test]
    fn high_snr_rates_degenerate_cases() {
        let s = SeriesControl::default();
        let hd_ideal = NetworkConfig {
            duplex: Duplex::Half,
            ..section4().ideal()
        };
        assert!(matches!(er_near_high_snr(&hd_ideal, s), Err(Error::DegenerateRate(_))));
        // FD with perfect SIC: only the destination ceiling diverges
        let fd_ideal = section4().ideal();
        let v = er_near_high_snr(&fd_ideal, s).unwrap();
        let relay: f64 = 0.3 * 8.0 / (0.5 * 1.0);
        assert!((v - 0.5 * (1.0 + relay).log2()).abs() < 1e-9);

        let crushed = NetworkConfig {
            kappa_rdf: 1e8,
            ..section4()
        };
        assert!(er_far_high_snr(&crushed, s).unwrap() < 1e-12);
    }

    #[test]
    fn half_duplex_prelog_halves_rates() {
        let s = SeriesControl::default();
        let on = NetworkConfig {
            duplex: Duplex::Half,
            ..section4()
        };
        let off = NetworkConfig {
            hd_prelog_half: false,
            ..on.clone()
        };
        let ratio = er_far_high_snr(&on, s).unwrap() / er_far_high_snr(&off, s).unwrap();
        assert!((ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn esr_decreases_with_epsilon() {
        let s = SeriesControl::default();
        let lo = esr_high_snr(
            &NetworkConfig {
                epsilon: 0.01,
                ..section4()
            },
            s,
        )
        .unwrap();
        let hi = esr_high_snr(
            &NetworkConfig {
                epsilon: 0.1,
                ..section4()
            },
            s,
        )
        .unwrap();
        assert!(lo >= hi);
    }

    #[test]
    fn fault_injection_moves_the_series() {
        let cfg = rayleigh_hd_ideal();
        let s = SeriesControl::default();
        let clean = op_far_series(&cfg, snr10(), s).unwrap().value;
        let bad = op_far_series_with_fault(&cfg, snr10(), s, 0.05).unwrap().value;
        assert!((clean - bad).abs() > 1e-2);
    }
}
