//! Network configuration and the instantaneous SINRs of the two-hop
//! decode-and-forward NOMA link.
//!
//! The source superposes the far user's symbol (power share `a1`) and the near
//! user's symbol (`a2`); the relay decodes both with SIC and re-superposes them
//! with shares `b1`, `b2`. Hardware distortion adds noise of power `kappa^2`
//! times the signal power on every hop, and imperfect SIC leaves a residual
//! interference power `g` from the first decoded symbol.

use crate::channel::RicianParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Duplex {
    Half,
    Full,
}

impl Duplex {
    pub const ALL: [Duplex; 2] = [Duplex::Half, Duplex::Full];

    /// Relay mode switch: 0 for half duplex, 1 for full duplex.
    pub fn switch(self) -> f64 {
        match self {
            Duplex::Half => 0.0,
            Duplex::Full => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Duplex::Half => "HD",
            Duplex::Full => "FD",
        }
    }
}

impl std::str::FromStr for Duplex {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hd" | "half" => Ok(Duplex::Half),
            "fd" | "full" => Ok(Duplex::Full),
            other => Err(format!("unknown duplex mode `{other}` (expected hd or fd)")),
        }
    }
}

impl std::fmt::Display for Duplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The two NOMA destinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum User {
    /// Weak-channel user, served with the larger power share.
    Far,
    /// Strong-channel user, decodes after SIC.
    Near,
}

impl User {
    pub const ALL: [User; 2] = [User::Far, User::Near];

    pub fn label(self) -> &'static str {
        match self {
            User::Far => "far",
            User::Near => "near",
        }
    }
}

/// The four fading links of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    SourceRelay,
    LoopInterference,
    RelayFar,
    RelayNear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub kappa_sr: f64,
    pub kappa_li: f64,
    pub kappa_rdf: f64,
    pub kappa_rdn: f64,
    /// Fraction of the first-decoded symbol left after imperfect SIC.
    pub epsilon: f64,
    pub duplex: Duplex,
    pub lambda_sr: f64,
    pub lambda_li: f64,
    pub lambda_rdf: f64,
    pub lambda_rdn: f64,
    /// Rician K shared by all four links.
    pub k_factor: f64,
    pub n0: f64,
    pub gamma_thf: f64,
    pub gamma_thn: f64,
    /// Scale half-duplex rates by 1/2 for the two-slot relaying penalty.
    pub hd_prelog_half: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            a1: 0.7,
            a2: 0.3,
            b1: 0.7,
            b2: 0.3,
            kappa_sr: 0.05,
            kappa_li: 0.05,
            kappa_rdf: 0.05,
            kappa_rdn: 0.05,
            epsilon: 0.01,
            duplex: Duplex::Full,
            lambda_sr: 8.0,
            lambda_li: 0.5,
            lambda_rdf: 8.0,
            lambda_rdn: 1.0,
            k_factor: 1.0,
            n0: 1.0,
            gamma_thf: 1.0,
            gamma_thn: 3.0,
            hd_prelog_half: true,
        }
    }
}

const SPLIT_TOL: f64 = 1e-9;

impl NetworkConfig {
    /// Returns every violated invariant, not just the first.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                bad.push(format!("{what} violated"));
            }
        };
        let all = [
            self.a1,
            self.a2,
            self.b1,
            self.b2,
            self.kappa_sr,
            self.kappa_li,
            self.kappa_rdf,
            self.kappa_rdn,
            self.epsilon,
            self.lambda_sr,
            self.lambda_li,
            self.lambda_rdf,
            self.lambda_rdn,
            self.k_factor,
            self.n0,
            self.gamma_thf,
            self.gamma_thn,
        ];
        check(all.iter().all(|v| v.is_finite()), "all parameters finite");
        check(self.a1 > self.a2, "a1 > a2");
        check(self.a2 > 0.0, "a2 > 0");
        check((self.a1 + self.a2 - 1.0).abs() <= SPLIT_TOL, "a1 + a2 = 1");
        check(self.b1 > self.b2, "b1 > b2");
        check(self.b2 > 0.0, "b2 > 0");
        check((self.b1 + self.b2 - 1.0).abs() <= SPLIT_TOL, "b1 + b2 = 1");
        check(self.epsilon >= 0.0 && self.epsilon < 1.0, "0 <= epsilon < 1");
        check(self.kappa_sr >= 0.0, "kappa_sr >= 0");
        check(self.kappa_li >= 0.0, "kappa_li >= 0");
        check(self.kappa_rdf >= 0.0, "kappa_rdf >= 0");
        check(self.kappa_rdn >= 0.0, "kappa_rdn >= 0");
        check(self.lambda_sr > 0.0, "lambda_sr > 0");
        check(self.lambda_li > 0.0, "lambda_li > 0");
        check(self.lambda_rdf > 0.0, "lambda_rdf > 0");
        check(self.lambda_rdn > 0.0, "lambda_rdn > 0");
        check(self.k_factor >= 0.0, "k_factor >= 0");
        check(self.n0 > 0.0, "n0 > 0");
        check(self.gamma_thf > 0.0, "gamma_thf > 0");
        check(self.gamma_thn > 0.0, "gamma_thn > 0");
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(bad))
        }
    }

    pub fn mean_gain(&self, link: Link) -> f64 {
        match link {
            Link::SourceRelay => self.lambda_sr,
            Link::LoopInterference => self.lambda_li,
            Link::RelayFar => self.lambda_rdf,
            Link::RelayNear => self.lambda_rdn,
        }
    }

    pub fn link(&self, link: Link) -> Result<RicianParams> {
        RicianParams::new(self.k_factor, self.mean_gain(link))
    }

    /// Sets all three signal-path impairment levels (`kappa_sr`, `kappa_rdf`,
    /// `kappa_rdn`) at once.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa_sr = kappa;
        self.kappa_rdf = kappa;
        self.kappa_rdn = kappa;
        self
    }

    /// Ideal hardware and perfect SIC.
    pub fn ideal(self) -> Self {
        NetworkConfig {
            kappa_li: 0.0,
            epsilon: 0.0,
            ..self.with_kappa(0.0)
        }
    }
}

/// Transmit SNRs of the source (`gamma = P_S / N0`) and relay
/// (`gamma_prime = P_R / N0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub gamma: f64,
    pub gamma_prime: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl SnrPoint {
    pub fn new(gamma: f64, gamma_prime: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param("gamma", format!("must be > 0, got {gamma}")));
        }
        if !(gamma_prime.is_finite() && gamma_prime > 0.0) {
            return Err(Error::param("gamma_prime", format!("must be > 0, got {gamma_prime}")));
        }
        Ok(SnrPoint { gamma, gamma_prime })
    }

    /// Source and relay at the same SNR.
    pub fn joint(gamma: f64) -> Result<Self> {
        Self::new(gamma, gamma)
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::joint(db_to_linear(db))
    }
}

/// One joint realization of the channel power gains plus the imperfect-SIC
/// residual powers seen at the relay (`g_sr`) and the near user (`g_rdn`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkGains {
    pub rho_sr: f64,
    pub rho_li: f64,
    pub rho_rdf: f64,
    pub rho_rdn: f64,
    pub g_sr: f64,
    pub g_rdn: f64,
}

/// Loop self-interference power at the relay input, including its distortion.
fn loop_interference(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let w = cfg.duplex.switch();
    gains.rho_li * w * w * snr.gamma_prime * (1.0 + cfg.kappa_sr * cfg.kappa_sr)
}

/// SINR of the far user's symbol at the relay (decoded first).
pub fn sinr_relay_far(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let k2 = cfg.kappa_sr * cfg.kappa_sr;
    let signal = cfg.a1 * gains.rho_sr * snr.gamma;
    signal / ((cfg.a2 + k2) * gains.rho_sr * snr.gamma + loop_interference(cfg, gains, snr) + 1.0)
}

/// SINR of the near user's symbol at the relay after SIC.
pub fn sinr_relay_near(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let k2 = cfg.kappa_sr * cfg.kappa_sr;
    let signal = cfg.a2 * gains.rho_sr * snr.gamma;
    signal
        / (gains.rho_sr * k2 * snr.gamma + loop_interference(cfg, gains, snr) + cfg.a1 * gains.g_sr * snr.gamma + 1.0)
}

pub fn sinr_far_user(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let rho = gains.rho_rdf;
    let k2 = cfg.kappa_rdf * cfg.kappa_rdf;
    cfg.b1 * rho * snr.gamma_prime / (cfg.b2 * rho * snr.gamma_prime + rho * k2 * snr.gamma_prime + 1.0)
}

/// SINR of the near user's own symbol after cancelling the far user's.
pub fn sinr_near_user_own(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let rho = gains.rho_rdn;
    let k2 = cfg.kappa_rdn * cfg.kappa_rdn;
    cfg.b2 * rho * snr.gamma_prime / (rho * k2 * snr.gamma_prime + cfg.b1 * gains.g_rdn * snr.gamma_prime + 1.0)
}

/// SINR of the far user's symbol at the near user (the SIC stage).
pub fn sinr_near_user_far_signal(cfg: &NetworkConfig, gains: &LinkGains, snr: SnrPoint) -> f64 {
    let rho = gains.rho_rdn;
    let k2 = cfg.kappa_rdn * cfg.kappa_rdn;
    cfg.b1 * rho * snr.gamma_prime / (cfg.b2 * rho * snr.gamma_prime + rho * k2 * snr.gamma_prime + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hd_ideal() -> NetworkConfig {
        NetworkConfig {
            duplex: Duplex::Half,
            ..NetworkConfig::default().ideal()
        }
    }

    fn unit_gains() -> LinkGains {
        LinkGains {
            rho_sr: 1.0,
            rho_li: 0.5,
            rho_rdf: 1.0,
            rho_rdn: 1.0,
            ..LinkGains::default()
        }
    }

    #[test]
    fn default_config_is_valid() {
        NetworkConfig::default().validate().unwrap();
    }

    #[test]
    fn validation_names_each_violation() {
        let cfg = NetworkConfig {
            a1: 0.2,
            a2: 0.8,
            epsilon: 1.0,
            lambda_li: 0.0,
            ..NetworkConfig::default()
        };
        let Err(Error::InvalidConfig(list)) = cfg.validate() else {
            panic!("expected violations");
        };
        assert!(list.contains(&"a1 > a2 violated".to_string()));
        assert!(list.contains(&"0 <= epsilon < 1 violated".to_string()));
        assert!(list.contains(&"lambda_li > 0 violated".to_string()));
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn ideal_half_duplex_relay_sinrs() {
        let snr = SnrPoint::joint(10.0).unwrap();
        let g = unit_gains();
        assert!((sinr_relay_far(&hd_ideal(), &g, snr) - 1.75).abs() < 1e-15);
        assert!((sinr_relay_near(&hd_ideal(), &g, snr) - 3.0).abs() < 1e-15);
        let zero = LinkGains { rho_sr: 0.0, ..g };
        assert_eq!(sinr_relay_far(&hd_ideal(), &zero, snr), 0.0);
    }

    #[test]
    fn full_duplex_relay_far_hand_value() {
        let cfg = NetworkConfig::default();
        let snr = SnrPoint::joint(10.0).unwrap();
        // 7 / (0.3025 * 10 + 0.5 * 10 * 1.0025 + 1)
        let expected = 7.0 / (3.025 + 5.0125 + 1.0);
        assert!((sinr_relay_far(&cfg, &unit_gains(), snr) - expected).abs() < 1e-14);
    }

    #[test]
    fn full_duplex_relay_near_hand_value() {
        let cfg = NetworkConfig::default();
        let snr = SnrPoint::joint(10.0).unwrap();
        let g = LinkGains {
            g_sr: 0.01,
            ..unit_gains()
        };
        // 3 / (0.025 + 5.0125 + 0.07 + 1)
        let expected = 3.0 / (0.025 + 5.0125 + 0.07 + 1.0);
        assert!((sinr_relay_near(&cfg, &g, snr) - expected).abs() < 1e-14);
    }

    #[test]
    fn residual_interference_lowers_relay_near_sinr() {
        let cfg = NetworkConfig::default();
        let snr = SnrPoint::joint(10.0).unwrap();
        let lo = sinr_relay_near(
            &cfg,
            &LinkGains {
                g_sr: 0.01,
                ..unit_gains()
            },
            snr,
        );
        let hi = sinr_relay_near(
            &cfg,
            &LinkGains {
                g_sr: 0.02,
                ..unit_gains()
            },
            snr,
        );
        assert!(hi < lo);
    }

    #[test]
    fn destination_sinrs() {
        let cfg = hd_ideal();
        let snr = SnrPoint::joint(10.0).unwrap();
        let g = unit_gains();
        assert!((sinr_far_user(&cfg, &g, snr) - 1.75).abs() < 1e-15);
        assert!((sinr_near_user_far_signal(&cfg, &g, snr) - 1.75).abs() < 1e-15);
        assert!((sinr_near_user_own(&cfg, &g, snr) - 3.0).abs() < 1e-15);

        let huge = LinkGains {
            rho_rdf: 1e12,
            rho_rdn: 1e12,
            ..g
        };
        assert!((sinr_far_user(&cfg, &huge, snr) - 7.0 / 3.0).abs() < 1e-9);
        assert!((sinr_near_user_far_signal(&cfg, &huge, snr) - 7.0 / 3.0).abs() < 1e-9);
        let dead = LinkGains { rho_rdn: 0.0, ..g };
        assert_eq!(sinr_near_user_own(&cfg, &dead, snr), 0.0);
    }

    #[test]
    fn destination_sinrs_nonideal_hand_values() {
        let cfg = NetworkConfig::default();
        let snr = SnrPoint::joint(10.0).unwrap();
        let g = LinkGains {
            rho_rdf: 2.0,
            rho_rdn: 0.5,
            g_rdn: 0.005,
            ..unit_gains()
        };
        // 0.7*2*10 / (0.3*2*10 + 2*0.0025*10 + 1)
        assert!((sinr_far_user(&cfg, &g, snr) - 14.0 / 7.05).abs() < 1e-14);
        // 0.7*0.5*10 / (0.3*0.5*10 + 0.5*0.0025*10 + 1)
        assert!((sinr_near_user_far_signal(&cfg, &g, snr) - 3.5 / 2.5125).abs() < 1e-14);
        // 0.3*0.5*10 / (0.5*0.0025*10 + 0.7*0.005*10 + 1)
        assert!((sinr_near_user_own(&cfg, &g, snr) - 1.5 / 1.0475).abs() < 1e-14);
    }

    #[test]
    fn half_duplex_ignores_loop_channel() {
        let cfg = NetworkConfig {
            duplex: Duplex::Half,
            ..NetworkConfig::default()
        };
        let snr = SnrPoint::joint(100.0).unwrap();
        let a = unit_gains();
        let b = LinkGains { rho_li: 37.0, ..a };
        assert_eq!(sinr_relay_far(&cfg, &a, snr), sinr_relay_far(&cfg, &b, snr));
        assert_eq!(sinr_relay_near(&cfg, &a, snr), sinr_relay_near(&cfg, &b, snr));
    }

    #[test]
    fn duplex_parses() {
        assert_eq!("FD".parse::<Duplex>().unwrap(), Duplex::Full);
        assert_eq!("hd".parse::<Duplex>().unwrap(), Duplex::Half);
        assert!("xd".parse::<Duplex>().is_err());
    }
}
