//! Numerical core for comparing the 1-D Wyner cellular model against a 1-D
//! grid network with uniformly random user locations.
//!
//! All lengths are expressed in units of the cell half-width `R`. Throughputs
//! are reported in bits (base-2 logarithms).

pub mod config;
pub mod downlink_mcp;
pub mod downlink_scp;
pub mod error;
pub mod geometry;
pub mod mc;
pub mod ofdma;
pub mod outage;
pub mod uplink_mcp;
pub mod uplink_scp;
pub mod wyner;

pub use config::{NetworkConfig, Topology};
pub use error::{Error, Result};
pub use mc::{Estimate, RandomPlan};
pub use outage::{CurveKind, OutageCurve, ThresholdGrid};
