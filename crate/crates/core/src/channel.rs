//! Rician fading statistics for channel power gains `rho = |h|^2`.
//!
//! A link is parameterized by its K-factor (line-of-sight to scatter power
//! ratio) and its mean power gain. With `K = 0` every function here reduces to
//! the exponential law of the same mean.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::special::{bessel_i0_scaled, poisson_pmf, regularized_gamma_int};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    k_factor: f64,
    mean_gain: f64,
}

impl RicianParams {
    pub fn new(k_factor: f64, mean_gain: f64) -> Result<Self> {
        if !(k_factor.is_finite() && k_factor >= 0.0) {
            return Err(Error::param(
                "k_factor",
                format!("must be finite and >= 0, got {k_factor}"),
            ));
        }
        if !(mean_gain.is_finite() && mean_gain > 0.0) {
            return Err(Error::param(
                "mean_gain",
                format!("must be finite and > 0, got {mean_gain}"),
            ));
        }
        Ok(RicianParams { k_factor, mean_gain })
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn mean_gain(&self) -> f64 {
        self.mean_gain
    }

    /// `(K + 1) / lambda`, the rate of the scattered component.
    pub fn rate(&self) -> f64 {
        (self.k_factor + 1.0) / self.mean_gain
    }
}

/// Truncation policy shared by every infinite sum in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    max_terms: usize,
    rel_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms < 1 {
            return Err(Error::param("max_terms", "must be at least 1"));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::param("rel_tol", format!("must lie in (0, 1), got {rel_tol}")));
        }
        Ok(SeriesControl { max_terms, rel_tol })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// The tighter control used for the convergence self-check.
    pub fn refined(&self) -> Self {
        SeriesControl {
            max_terms: self.max_terms * 2,
            rel_tol: self.rel_tol / 10.0,
        }
    }

    /// Minimum number of terms before the relative stopping rule may fire.
    /// Poisson(K)-weighted terms rise until `l ~ K`.
    pub fn min_terms(&self, k_factor: f64) -> usize {
        (k_factor.ceil() as usize + 5).min(self.max_terms)
    }

    /// True once `terms` terms have been consumed and the latest one is
    /// negligible against the running sum.
    pub fn should_stop(&self, terms: usize, k_factor: f64, latest: f64, sum: f64) -> bool {
        terms >= self.min_terms(k_factor) && latest.abs() <= self.rel_tol * sum.abs()
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 200,
            rel_tol: 1e-12,
        }
    }
}

/// Probability density of the channel power gain.
pub fn rician_pdf(x: f64, p: RicianParams) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let k = p.k_factor;
    let rate = p.rate();
    let z = 2.0 * (k * rate * x).sqrt();
    // e^{-K - rate x} I0(z) = e^{-K - rate x + z} * (e^{-z} I0(z))
    rate * (z - k - rate * x).exp() * bessel_i0_scaled(z)
}

/// Result of summing the Poisson(K) mixture of gamma laws that gives the
/// distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSum {
    pub cdf: f64,
    pub ccdf: f64,
    pub terms: usize,
    pub cdf_converged: bool,
    pub ccdf_converged: bool,
    /// Both series met the tolerance.
    pub converged: bool,
}

/// Sums `F(x)` and `1 - F(x)` together, each from its own non-cancelling
/// series, stopping once both have met the tolerance.
pub fn distribution_sum(x: f64, p: RicianParams, s: SeriesControl) -> DistributionSum {
    if x <= 0.0 {
        return DistributionSum {
            cdf: 0.0,
            ccdf: 1.0,
            terms: 0,
            cdf_converged: true,
            ccdf_converged: true,
            converged: true,
        };
    }
    let k = p.k_factor;
    let y = p.rate() * x;
    let mut cdf = 0.0;
    let mut ccdf = 0.0;
    let (mut cdf_done, mut ccdf_done) = (false, false);
    let mut terms = 0;
    while terms < s.max_terms && !(cdf_done && ccdf_done) {
        let w = poisson_pmf(k, terms);
        let (lower, upper) = regularized_gamma_int(terms + 1, y);
        let (tc, tq) = (w * lower, w * upper);
        cdf += tc;
        ccdf += tq;
        terms += 1;
        cdf_done |= s.should_stop(terms, k, tc, cdf);
        ccdf_done |= s.should_stop(terms, k, tq, ccdf);
    }
    DistributionSum {
        cdf: cdf.clamp(0.0, 1.0),
        ccdf: ccdf.clamp(0.0, 1.0),
        terms,
        cdf_converged: cdf_done,
        ccdf_converged: ccdf_done,
        converged: cdf_done && ccdf_done,
    }
}

pub fn rician_cdf(x: f64, p: RicianParams, s: SeriesControl) -> Result<f64> {
    let sum = distribution_sum(x, p, s);
    if sum.cdf_converged {
        Ok(sum.cdf)
    } else {
        Err(Error::NotConverged {
            partial: sum.cdf,
            terms: sum.terms,
        })
    }
}

/// Survival function `Pr(rho > x)`; accurate where it is small because it
/// never forms `1 - cdf`.
pub fn rician_ccdf(x: f64, p: RicianParams, s: SeriesControl) -> Result<f64> {
    let sum = distribution_sum(x, p, s);
    if sum.ccdf_converged {
        Ok(sum.ccdf)
    } else {
        Err(Error::NotConverged {
            partial: sum.ccdf,
            terms: sum.terms,
        })
    }
}

/// Draws `rho = |nu + w|^2` with a real line-of-sight amplitude
/// `nu = sqrt(K lambda / (K + 1))` and circular Gaussian scatter of total
/// power `lambda / (K + 1)`.
pub fn sample_gain<R: Rng + ?Sized>(p: RicianParams, rng: &mut R) -> f64 {
    let scatter = p.mean_gain / (p.k_factor + 1.0);
    let los = (p.k_factor * scatter).sqrt();
    let sigma = (0.5 * scatter).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let i = los + sigma * re;
    let q = sigma * im;
    i * i + q * q
}
