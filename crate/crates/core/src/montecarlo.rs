//! Direct simulation of the outage events and achievable rates.
//!
//! Trials are split into fixed-size blocks. Block `b` draws from a ChaCha8
//! stream keyed by `(seed, b)`, and block results are reduced in block order,
//! so estimates depend only on `(seed, trials)` and never on the number of
//! worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::channel::{sample_gain, RicianParams};
use crate::error::{Error, Result};
use crate::system_model::{
    sinr_far_user, sinr_near_user_far_signal, sinr_near_user_own, sinr_relay_far, sinr_relay_near, Duplex, Link,
    LinkGains, NetworkConfig, SnrPoint,
};

pub const BLOCK_TRIALS: u64 = 1 << 14;

/// How the imperfect-SIC residual power is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IpsicMode {
    /// `g = epsilon * rho`, the form the closed-form analysis assumes.
    #[default]
    Deterministic,
    /// `g = |w|^2` with `w` circular Gaussian of variance `epsilon * rho`.
    Exponential,
}

impl IpsicMode {
    pub fn label(self) -> &'static str {
        match self {
            IpsicMode::Deterministic => "deterministic",
            IpsicMode::Exponential => "exponential",
        }
    }
}

impl std::str::FromStr for IpsicMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "deterministic" => Ok(IpsicMode::Deterministic),
            "exponential" => Ok(IpsicMode::Exponential),
            other => Err(format!(
                "unknown ipsic mode `{other}` (expected deterministic or exponential)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub trials: u64,
    pub seed: u64,
    pub ipsic_mode: IpsicMode,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            trials: 1_000_000,
            seed: 0x5eed_f00d,
            ipsic_mode: IpsicMode::Deterministic,
        }
    }
}

impl McSettings {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    fn from_count(hits: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = hits as f64 / n;
        McEstimate {
            value: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            trials,
        }
    }

    fn from_moments(m: Moments) -> Self {
        let n = m.count as f64;
        let mean = m.sum / n;
        let var = if m.count > 1 {
            ((m.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        McEstimate {
            value: mean,
            std_error: (var / n).sqrt(),
            trials: m.count,
        }
    }

    /// Binomial standard error the estimate would have if the true
    /// probability were `p`.
    pub fn binomial_se_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }
}

/// Draws joint link gains for one configuration; the Rician parameters are
/// validated once at construction.
#[derive(Debug, Clone, Copy)]
pub struct GainSampler {
    sr: RicianParams,
    li: RicianParams,
    rdf: RicianParams,
    rdn: RicianParams,
    epsilon: f64,
    mode: IpsicMode,
}

impl GainSampler {
    pub fn new(cfg: &NetworkConfig, mode: IpsicMode) -> Result<Self> {
        cfg.validate()?;
        Ok(GainSampler {
            sr: cfg.link(Link::SourceRelay)?,
            li: cfg.link(Link::LoopInterference)?,
            rdf: cfg.link(Link::RelayFar)?,
            rdn: cfg.link(Link::RelayNear)?,
            epsilon: cfg.epsilon,
            mode,
        })
    }

    fn residual<R: Rng + ?Sized>(&self, rho: f64, rng: &mut R) -> f64 {
        if self.epsilon == 0.0 {
            return 0.0;
        }
        match self.mode {
            IpsicMode::Deterministic => self.epsilon * rho,
            IpsicMode::Exponential => {
                let e: f64 = Exp1.sample(rng);
                self.epsilon * rho * e
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LinkGains {
        let rho_sr = sample_gain(self.sr, rng);
        let rho_li = sample_gain(self.li, rng);
        let rho_rdf = sample_gain(self.rdf, rng);
        let rho_rdn = sample_gain(self.rdn, rng);
        let g_sr = self.residual(rho_sr, rng);
        let g_rdn = self.residual(rho_rdn, rng);
        LinkGains {
            rho_sr,
            rho_li,
            rho_rdf,
            rho_rdn,
            g_sr,
            g_rdn,
        }
    }
}

/// One joint draw of all link gains and residuals.
pub fn sample_link_gains<R: Rng + ?Sized>(cfg: &NetworkConfig, mode: IpsicMode, rng: &mut R) -> Result<LinkGains> {
    Ok(GainSampler::new(cfg, mode)?.sample(rng))
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `f` over every block in parallel and returns the block results in
/// block order.
fn run_blocks<A, F>(mc: &McSettings, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> A + Sync,
{
    let blocks = mc.trials.div_ceil(BLOCK_TRIALS);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_TRIALS.min(mc.trials - b * BLOCK_TRIALS);
            let mut rng = block_rng(mc.seed, b);
            f(&mut rng, n)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimates {
    pub far: McEstimate,
    pub near: McEstimate,
}

/// Per-trial outage indicators `(far, near)`.
fn outage_events(cfg: &NetworkConfig, g: &LinkGains, snr: SnrPoint) -> (bool, bool) {
    let relay_ok = sinr_relay_far(cfg, g, snr) >= cfg.gamma_thf && sinr_relay_near(cfg, g, snr) >= cfg.gamma_thn;
    let far_ok = relay_ok && sinr_far_user(cfg, g, snr) >= cfg.gamma_thf;
    let near_ok = relay_ok
        && sinr_near_user_far_signal(cfg, g, snr) >= cfg.gamma_thf
        && sinr_near_user_own(cfg, g, snr) >= cfg.gamma_thn;
    (!far_ok, !near_ok)
}

pub fn mc_outage(cfg: &NetworkConfig, snr: SnrPoint, mc: &McSettings) -> Result<OutageEstimates> {
    mc.validate()?;
    let sampler = GainSampler::new(cfg, mc.ipsic_mode)?;
    let counts = run_blocks(mc, |rng, n| {
        let (mut far, mut near) = (0u64, 0u64);
        for _ in 0..n {
            let g = sampler.sample(rng);
            let (f, nr) = outage_events(cfg, &g, snr);
            far += f as u64;
            near += nr as u64;
        }
        (far, near)
    });
    let (far, near) = counts.iter().fold((0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    Ok(OutageEstimates {
        far: McEstimate::from_count(far, mc.trials),
        near: McEstimate::from_count(near, mc.trials),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicEstimates {
    pub far: McEstimate,
    pub near: McEstimate,
    pub sum: McEstimate,
    /// Empirical `Pr(rho_rdn >= rho_rdf)`, the fraction of trials in which the
    /// near user is served.
    pub near_served: McEstimate,
}

/// Ergodic rates, bits/s/Hz. The near user's rate is zero in trials where its
/// channel is weaker than the far user's.
pub fn mc_ergodic_rates(cfg: &NetworkConfig, snr: SnrPoint, mc: &McSettings) -> Result<ErgodicEstimates> {
    mc.validate()?;
    let sampler = GainSampler::new(cfg, mc.ipsic_mode)?;
    let prelog = if cfg.duplex == Duplex::Half && cfg.hd_prelog_half {
        0.5
    } else {
        1.0
    };
    let blocks = run_blocks(mc, |rng, n| {
        let mut far = Moments::default();
        let mut near = Moments::default();
        let mut sum = Moments::default();
        let mut served = 0u64;
        for _ in 0..n {
            let g = sampler.sample(rng);
            let rf = prelog * (1.0 + sinr_relay_far(cfg, &g, snr).min(sinr_far_user(cfg, &g, snr))).log2();
            let rn = if g.rho_rdn < g.rho_rdf {
                0.0
            } else {
                served += 1;
                prelog * (1.0 + sinr_relay_near(cfg, &g, snr).min(sinr_near_user_own(cfg, &g, snr))).log2()
            };
            far.push(rf);
            near.push(rn);
            sum.push(rf + rn);
        }
        (far, near, sum, served)
    });
    let mut far = Moments::default();
    let mut near = Moments::default();
    let mut sum = Moments::default();
    let mut served = 0;
    for (f, n, s, c) in &blocks {
        far.merge(f);
        near.merge(n);
        sum.merge(s);
        served += c;
    }
    Ok(ErgodicEstimates {
        far: McEstimate::from_moments(far),
        near: McEstimate::from_moments(near),
        sum: McEstimate::from_moments(sum),
        near_served: McEstimate::from_count(served, mc.trials),
    })
}
