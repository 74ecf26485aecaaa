//! OFDMA uplink: each subchannel carries `M` users per cell, interpolating
//! between intracell TDMA (`M = 1`) and CDMA (`M = K`).

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::geometry::uplink_factors;
use crate::mc::RandomPlan;
use crate::outage::{CurveKind, OutageCurve};
use crate::uplink_scp::{exceedance_curve, gaussian_tail, sample_neighbourhood};
use crate::wyner::{Calibration, MomentSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfdmaScenario {
    pub m_interferers: usize,
    pub base: NetworkConfig,
}

impl OfdmaScenario {
    pub fn new(base: NetworkConfig, m_interferers: usize) -> Result<Self> {
        if m_interferers == 0 || m_interferers > base.users_per_cell {
            return Err(Error::Config(format!(
                "ofdma_interferers = {m_interferers} outside [1, {}]",
                base.users_per_cell
            )));
        }
        Ok(Self { m_interferers, base })
    }

    pub fn from_config(base: &NetworkConfig) -> Result<Self> {
        Self::new(base.clone(), base.ofdma_interferers)
    }
}

/// Per-trial `sum_{k<=M} (U_k + V_k)` with the `M` co-channel users of each
/// neighbour cell drawn without replacement.
pub fn ofdma_interference_samples(sc: &OfdmaScenario, plan: &RandomPlan) -> Vec<f64> {
    let cfg = &sc.base;
    let beta = cfg.pathloss_exp;
    let k = cfg.users_per_cell;
    let m = sc.m_interferers;
    plan.sample(|rng| {
        let layout = sample_neighbourhood(cfg, rng);
        let left = index::sample(rng, k, m);
        let right = index::sample(rng, k, m);
        let u: f64 = left.iter().map(|i| uplink_factors(&layout, 0, i, beta).u).sum();
        let v: f64 = right.iter().map(|j| uplink_factors(&layout, 2, j, beta).v).sum();
        u + v
    })
}

/// Empirical `P[sum_{k<=M} (U_k + V_k) > M / theta]`.
pub fn ofdma_outage_mc(sc: &OfdmaScenario, thresholds: &[f64], plan: &RandomPlan) -> Result<OutageCurve> {
    let m = sc.m_interferers as f64;
    exceedance_curve(&ofdma_interference_samples(sc, plan), thresholds, |t| m / t)
}

/// `Q((M/theta - M mu_pair) / sqrt(M sigma_u^2))`.
pub fn ofdma_outage_gaussian(
    sc: &OfdmaScenario,
    calibration: &Calibration,
    source: MomentSource,
    thresholds: &[f64],
) -> OutageCurve {
    let m = sc.m_interferers as f64;
    let p = calibration.pair_moments(source);
    let values = thresholds
        .iter()
        .map(|&t| gaussian_tail(m / t - m * p.mean, (m * p.var).sqrt()))
        .collect();
    OutageCurve::analytic(CurveKind::GaussianApprox, thresholds, values)
}
