//! Flat `key = value` run configuration.
//!
//! Lines hold one assignment each; `#` starts a comment. Unknown or repeated
//! keys are rejected, missing keys keep their defaults. When only one share
//! of a power split (`a1`/`a2`, `b1`/`b2`) is given, the other is set to its
//! complement.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::channel::SeriesControl;
use crate::error::{Error, Result};
use crate::montecarlo::{IpsicMode, McSettings};
use crate::system_model::{Duplex, NetworkConfig};

/// SNR axis and figure grids.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    /// Relay SNR relative to the source SNR, in dB. Zero sweeps them jointly.
    pub relay_snr_offset_db: f64,
    pub modes: Vec<Duplex>,
    pub k_factors: Vec<f64>,
    pub threshold_pairs: Vec<(f64, f64)>,
    /// Upper end of the kappa and epsilon axes of the outage surface.
    pub surface_max: f64,
    pub surface_step: f64,
    pub surface_snr_db: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            snr_db_start: 0.0,
            snr_db_stop: 50.0,
            snr_db_step: 5.0,
            relay_snr_offset_db: 0.0,
            modes: vec![Duplex::Half, Duplex::Full],
            k_factors: vec![0.0, 1.0],
            threshold_pairs: vec![(1.0, 3.0), (0.5, 1.5)],
            surface_max: 0.3,
            surface_step: 0.05,
            surface_snr_db: 10.0,
        }
    }
}

/// `start, start + step, ...` up to `stop` inclusive, without accumulating
/// rounding error.
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

impl SweepSpec {
    pub fn snr_points_db(&self) -> Vec<f64> {
        grid(self.snr_db_start, self.snr_db_stop, self.snr_db_step)
    }

    pub fn surface_axis(&self) -> Vec<f64> {
        grid(0.0, self.surface_max, self.surface_step)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                bad.push(format!("{what} violated"));
            }
        };
        check(self.snr_db_step > 0.0, "snr_db_step > 0");
        check(self.snr_db_start <= self.snr_db_stop, "snr_db_start <= snr_db_stop");
        check(self.relay_snr_offset_db.is_finite(), "relay_snr_offset_db finite");
        check(!self.modes.is_empty(), "modes nonempty");
        check(!self.k_factors.is_empty(), "k_factors nonempty");
        check(
            self.k_factors.iter().all(|k| k.is_finite() && *k >= 0.0),
            "k_factors >= 0",
        );
        check(!self.threshold_pairs.is_empty(), "threshold_pairs nonempty");
        check(
            self.threshold_pairs.iter().all(|(f, n)| *f > 0.0 && *n > 0.0),
            "threshold_pairs > 0",
        );
        check(self.surface_step > 0.0, "surface_step > 0");
        check(
            self.surface_max >= 0.0 && self.surface_max < 1.0,
            "0 <= surface_max < 1",
        );
        check(self.surface_snr_db.is_finite(), "surface_snr_db finite");
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(bad))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub network: NetworkConfig,
    pub sweep: SweepSpec,
    pub mc: McSettings,
    pub series: SeriesControl,
}

const KEYS: &[&str] = &[
    "a1",
    "a2",
    "b1",
    "b2",
    "kappa_sr",
    "kappa_li",
    "kappa_rdf",
    "kappa_rdn",
    "epsilon",
    "duplex",
    "lambda_sr",
    "lambda_li",
    "lambda_rdf",
    "lambda_rdn",
    "k_factor",
    "n0",
    "gamma_thf",
    "gamma_thn",
    "hd_prelog_half",
    "snr_db_start",
    "snr_db_stop",
    "snr_db_step",
    "relay_snr_offset_db",
    "modes",
    "k_factors",
    "threshold_pairs",
    "surface_max",
    "surface_step",
    "surface_snr_db",
    "trials",
    "seed",
    "ipsic_mode",
    "max_terms",
    "rel_tol",
];

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| Error::Parse {
        line,
        message: format!("bad value `{raw}` for `{key}`: {e}"),
    })
}

fn parse_list<T, F>(line: usize, key: &str, raw: &str, item: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> std::result::Result<T, String>,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            item(s).map_err(|e| Error::Parse {
                line,
                message: format!("bad list item `{s}` for `{key}`: {e}"),
            })
        })
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (f, n) = s.split_once(':').ok_or("expected `thr_f:thr_n`")?;
    let f = f.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let n = n.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((f, n))
}

/// Parses configuration text and validates the resulting records.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut run = RunConfig::default();
    let mut seen = HashSet::new();
    let mut max_terms = run.series.max_terms();
    let mut rel_tol = run.series.rel_tol();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        let net = &mut run.network;
        let sweep = &mut run.sweep;
        let f = || parse_value::<f64>(line, key, value);
        match key {
            "a1" => net.a1 = f()?,
            "a2" => net.a2 = f()?,
            "b1" => net.b1 = f()?,
            "b2" => net.b2 = f()?,
            "kappa_sr" => net.kappa_sr = f()?,
            "kappa_li" => net.kappa_li = f()?,
            "kappa_rdf" => net.kappa_rdf = f()?,
            "kappa_rdn" => net.kappa_rdn = f()?,
            "epsilon" => net.epsilon = f()?,
            "duplex" => net.duplex = parse_value(line, key, value)?,
            "lambda_sr" => net.lambda_sr = f()?,
            "lambda_li" => net.lambda_li = f()?,
            "lambda_rdf" => net.lambda_rdf = f()?,
            "lambda_rdn" => net.lambda_rdn = f()?,
            "k_factor" => net.k_factor = f()?,
            "n0" => net.n0 = f()?,
            "gamma_thf" => net.gamma_thf = f()?,
            "gamma_thn" => net.gamma_thn = f()?,
            "hd_prelog_half" => net.hd_prelog_half = parse_value(line, key, value)?,
            "snr_db_start" => sweep.snr_db_start = f()?,
            "snr_db_stop" => sweep.snr_db_stop = f()?,
            "snr_db_step" => sweep.snr_db_step = f()?,
            "relay_snr_offset_db" => sweep.relay_snr_offset_db = f()?,
            "modes" => sweep.modes = parse_list(line, key, value, |s| s.parse::<Duplex>())?,
            "k_factors" => {
                sweep.k_factors = parse_list(line, key, value, |s| s.parse::<f64>().map_err(|e| e.to_string()))?
            }
            "threshold_pairs" => sweep.threshold_pairs = parse_list(line, key, value, parse_pair)?,
            "surface_max" => sweep.surface_max = f()?,
            "surface_step" => sweep.surface_step = f()?,
            "surface_snr_db" => sweep.surface_snr_db = f()?,
            "trials" => run.mc.trials = parse_value(line, key, value)?,
            "seed" => run.mc.seed = parse_value(line, key, value)?,
            "ipsic_mode" => run.mc.ipsic_mode = parse_value::<IpsicMode>(line, key, value)?,
            "max_terms" => max_terms = parse_value(line, key, value)?,
            "rel_tol" => rel_tol = f()?,
            _ => unreachable!("key list and match arms out of sync"),
        }
    }

    let net = &mut run.network;
    match (seen.contains("a1"), seen.contains("a2")) {
        (true, false) => net.a2 = 1.0 - net.a1,
        (false, true) => net.a1 = 1.0 - net.a2,
        _ => {}
    }
    match (seen.contains("b1"), seen.contains("b2")) {
        (true, false) => net.b2 = 1.0 - net.b1,
        (false, true) => net.b1 = 1.0 - net.b2,
        _ => {}
    }

    run.series = SeriesControl::new(max_terms, rel_tol)?;
    run.network.validate()?;
    run.sweep.validate()?;
    run.mc.validate()?;
    Ok(run)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

/// Renders a configuration that [`parse_config_str`] reads back unchanged.
pub fn to_config_string(run: &RunConfig) -> String {
    let n = &run.network;
    let s = &run.sweep;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("a1", n.a1.to_string());
    kv("a2", n.a2.to_string());
    kv("b1", n.b1.to_string());
    kv("b2", n.b2.to_string());
    kv("kappa_sr", n.kappa_sr.to_string());
    kv("kappa_li", n.kappa_li.to_string());
    kv("kappa_rdf", n.kappa_rdf.to_string());
    kv("kappa_rdn", n.kappa_rdn.to_string());
    kv("epsilon", n.epsilon.to_string());
    kv("duplex", n.duplex.label().to_ascii_lowercase());
    kv("lambda_sr", n.lambda_sr.to_string());
    kv("lambda_li", n.lambda_li.to_string());
    kv("lambda_rdf", n.lambda_rdf.to_string());
    kv("lambda_rdn", n.lambda_rdn.to_string());
    kv("k_factor", n.k_factor.to_string());
    kv("n0", n.n0.to_string());
    kv("gamma_thf", n.gamma_thf.to_string());
    kv("gamma_thn", n.gamma_thn.to_string());
    kv("hd_prelog_half", n.hd_prelog_half.to_string());
    kv("snr_db_start", s.snr_db_start.to_string());
    kv("snr_db_stop", s.snr_db_stop.to_string());
    kv("snr_db_step", s.snr_db_step.to_string());
    kv("relay_snr_offset_db", s.relay_snr_offset_db.to_string());
    kv("modes", join(&s.modes, |d| d.label().to_ascii_lowercase()));
    kv("k_factors", join(&s.k_factors, |k| k.to_string()));
    kv("threshold_pairs", join(&s.threshold_pairs, |(f, n)| format!("{f}:{n}")));
    kv("surface_max", s.surface_max.to_string());
    kv("surface_step", s.surface_step.to_string());
    kv("surface_snr_db", s.surface_snr_db.to_string());
    kv("trials", run.mc.trials.to_string());
    kv("seed", run.mc.seed.to_string());
    kv("ipsic_mode", run.mc.ipsic_mode.label().to_string());
    kv("max_terms", run.series.max_terms().to_string());
    kv("rel_tol", run.series.rel_tol().to_string());
    out
}
