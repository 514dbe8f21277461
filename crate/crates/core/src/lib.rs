//! Outage and ergodic-rate analysis of a full-duplex cooperative NOMA relay
//! network over Rician fading, with residual hardware impairments and
//! imperfect successive interference cancellation.
//!
//! Outage probabilities are available from a closed-form series, from
//! numerical quadrature and from Monte Carlo simulation, so each route can be
//! checked against the others.

pub mod analytics;
pub mod channel;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod system_model;

pub use analytics::{Method, NearSeriesForm, OutageResult, ThresholdCoefficients};
pub use channel::{RicianParams, SeriesControl};
pub use error::{Error, Result};
pub use montecarlo::{IpsicMode, McEstimate, McSettings};
pub use system_model::{Duplex, LinkGains, NetworkConfig, SnrPoint, User};
