//! CSV sweeps: outage against SNR, outage over the (kappa, epsilon) plane and
//! ergodic rates against SNR.
//!
//! Grid points are evaluated in parallel and written in grid order, so the
//! output bytes depend only on the configuration.

use std::io::Write;

use rayon::prelude::*;

use super::config::{grid, RunConfig};
use crate::analytics::{self, Method};
use crate::error::{Error, Result};
use crate::montecarlo::{mc_ergodic_rates, mc_outage};
use crate::system_model::{db_to_linear, Duplex, NetworkConfig, SnrPoint, User};

/// SNR point for a source SNR in dB with the relay offset applied.
pub fn snr_point(db: f64, relay_offset_db: f64) -> Result<SnrPoint> {
    SnrPoint::new(db_to_linear(db), db_to_linear(db + relay_offset_db))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source: e,
    }
}

fn fmt_or_nan(v: Result<f64>) -> String {
    match v {
        Ok(x) => x.to_string(),
        Err(_) => "nan".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpRow {
    pub mode: Duplex,
    pub k: f64,
    pub thr_f: f64,
    pub thr_n: f64,
    pub snr_db: f64,
    pub user: User,
    pub op_series: f64,
    pub op_quadrature: f64,
    pub op_asymptotic: f64,
    pub op_mc: f64,
    pub mc_se: f64,
    pub series_converged: bool,
}

pub const OP_HEADER: &str =
    "mode,k,thr_f,thr_n,snr_db,user,op_series,op_quadrature,op_asymptotic,op_mc,mc_se,series_converged";

impl OpRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.mode.label(),
            self.k,
            self.thr_f,
            self.thr_n,
            self.snr_db,
            self.user.label(),
            self.op_series,
            self.op_quadrature,
            self.op_asymptotic,
            self.op_mc,
            self.mc_se,
            self.series_converged
        )
    }
}

/// Outage of both users by every method over modes x K x threshold pairs x
/// SNR. Rows come far first, then near, for each grid point.
pub fn sweep_op(run: &RunConfig) -> Result<Vec<OpRow>> {
    let sw = &run.sweep;
    let mut points = Vec::new();
    for &mode in &sw.modes {
        for &k in &sw.k_factors {
            for &(thr_f, thr_n) in &sw.threshold_pairs {
                for db in sw.snr_points_db() {
                    let cfg = NetworkConfig {
                        duplex: mode,
                        k_factor: k,
                        gamma_thf: thr_f,
                        gamma_thn: thr_n,
                        ..run.network.clone()
                    };
                    points.push((cfg, db));
                }
            }
        }
    }
    let rows: Result<Vec<[OpRow; 2]>> = points
        .par_iter()
        .map(|(cfg, db)| {
            let snr = snr_point(*db, sw.relay_snr_offset_db)?;
            let mc = mc_outage(cfg, snr, &run.mc)?;
            let row = |user: User| -> Result<OpRow> {
                let series = analytics::outage(cfg, snr, user, Method::Series, run.series)?;
                let quad = analytics::outage(cfg, snr, user, Method::Quadrature, run.series)?;
                let asym = analytics::outage(cfg, snr, user, Method::Asymptotic, run.series)?;
                let est = match user {
                    User::Far => mc.far,
                    User::Near => mc.near,
                };
                Ok(OpRow {
                    mode: cfg.duplex,
                    k: cfg.k_factor,
                    thr_f: cfg.gamma_thf,
                    thr_n: cfg.gamma_thn,
                    snr_db: *db,
                    user,
                    op_series: series.value,
                    op_quadrature: quad.value,
                    op_asymptotic: asym.value,
                    op_mc: est.value,
                    mc_se: est.std_error,
                    series_converged: series.converged,
                })
            };
            Ok([row(User::Far)?, row(User::Near)?])
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

pub fn write_op_csv<W: Write>(rows: &[OpRow], mut out: W) -> Result<()> {
    writeln!(out, "{OP_HEADER}").map_err(io_err)?;
    for r in rows {
        writeln!(out, "{}", r.to_csv()).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRow {
    pub kappa: f64,
    pub epsilon: f64,
    pub user: User,
    pub op_quadrature: f64,
    pub op_mc: f64,
    pub mc_se: f64,
}

pub const SURFACE_HEADER: &str = "kappa,epsilon,user,op_quadrature,op_mc,mc_se";

/// FD outage over kappa (source-relay and both relay-user links together)
/// and epsilon at the configured surface SNR.
pub fn surface_op(run: &RunConfig) -> Result<Vec<SurfaceRow>> {
    let sw = &run.sweep;
    let axis = sw.surface_axis();
    let snr = snr_point(sw.surface_snr_db, sw.relay_snr_offset_db)?;
    let points: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&kappa| axis.iter().map(move |&eps| (kappa, eps)))
        .collect();
    let rows: Result<Vec<[SurfaceRow; 2]>> = points
        .par_iter()
        .map(|&(kappa, epsilon)| {
            let cfg = NetworkConfig {
                duplex: Duplex::Full,
                epsilon,
                ..run.network.clone().with_kappa(kappa)
            };
            let mc = mc_outage(&cfg, snr, &run.mc)?;
            let far = analytics::op_far_quadrature(&cfg, snr)?;
            let near = analytics::op_near_quadrature(&cfg, snr)?;
            let row = |user, quad: f64, est: crate::McEstimate| SurfaceRow {
                kappa,
                epsilon,
                user,
                op_quadrature: quad,
                op_mc: est.value,
                mc_se: est.std_error,
            };
            Ok([row(User::Far, far.value, mc.far), row(User::Near, near.value, mc.near)])
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

pub fn write_surface_csv<W: Write>(run: &RunConfig, rows: &[SurfaceRow], mut out: W) -> Result<()> {
    let sw = &run.sweep;
    writeln!(
        out,
        "# FD outage surface: snr_db={}, k={}, thr_f={}, thr_n={}, kappa and epsilon in [0, {}] step {}",
        sw.surface_snr_db,
        run.network.k_factor,
        run.network.gamma_thf,
        run.network.gamma_thn,
        sw.surface_max,
        sw.surface_step
    )
    .map_err(io_err)?;
    writeln!(out, "{SURFACE_HEADER}").map_err(io_err)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.kappa,
            r.epsilon,
            r.user.label(),
            r.op_quadrature,
            r.op_mc,
            r.mc_se
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub const ER_HEADER: &str =
    "mode,snr_db,er_far_mc,er_far_se,er_near_mc,er_near_se,esr_mc,er_far_high,er_near_high,esr_high";

/// Ergodic rates against SNR for each mode, at the configured K. The
/// high-SNR columns are constant per mode; `nan` marks an undefined ceiling.
pub fn sweep_er(run: &RunConfig) -> Result<Vec<String>> {
    let sw = &run.sweep;
    let mut points = Vec::new();
    for &mode in &sw.modes {
        for db in sw.snr_points_db() {
            points.push((mode, db));
        }
    }
    points
        .par_iter()
        .map(|&(mode, db)| {
            let cfg = NetworkConfig {
                duplex: mode,
                ..run.network.clone()
            };
            let snr = snr_point(db, sw.relay_snr_offset_db)?;
            let est = mc_ergodic_rates(&cfg, snr, &run.mc)?;
            Ok(format!(
                "{},{},{},{},{},{},{},{},{},{}",
                mode.label(),
                db,
                est.far.value,
                est.far.std_error,
                est.near.value,
                est.near.std_error,
                est.sum.value,
                fmt_or_nan(analytics::er_far_high_snr(&cfg, run.series)),
                fmt_or_nan(analytics::er_near_high_snr(&cfg, run.series)),
                fmt_or_nan(analytics::esr_high_snr(&cfg, run.series)),
            ))
        })
        .collect()
}

pub fn write_er_csv<W: Write>(rows: &[String], mut out: W) -> Result<()> {
    writeln!(out, "{ER_HEADER}").map_err(io_err)?;
    for r in rows {
        writeln!(out, "{r}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Evenly spaced SNRs in dB between the sweep endpoints, `n >= 2` points.
pub fn spread(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n < 2 || stop <= start {
        return vec![start];
    }
    grid(0.0, (n - 1) as f64, 1.0)
        .into_iter()
        .map(|i| start + (stop - start) * i / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config_str;

    #[test]
    fn default_op_sweep_has_176_rows() {
        let run = parse_config_str("trials = 1000").unwrap();
        let rows = sweep_op(&run).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 11 * 2);
        assert_eq!(rows[0].mode, Duplex::Half);
        assert_eq!(rows[0].user, User::Far);
        assert_eq!(rows[1].user, User::Near);
        assert_eq!(rows.last().unwrap().mode, Duplex::Full);
    }

    #[test]
    fn surface_has_98_rows() {
        let run = parse_config_str("trials = 1000").unwrap();
        assert_eq!(surface_op(&run).unwrap().len(), 7 * 7 * 2);
    }

    #[test]
    fn spread_endpoints() {
        let s = spread(0.0, 50.0, 8);
        assert_eq!(s.len(), 8);
        assert_eq!((s[0], s[7]), (0.0, 50.0));
    }
}
