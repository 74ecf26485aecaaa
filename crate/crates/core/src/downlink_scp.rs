//! Downlink single-cell processing with perfect channel inversion (PCI) and
//! with equal transmit power per user (ETP).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::geometry::{downlink_factor_at, sample_offset, uplink_factors_at};
use crate::mc::{Estimate, RandomPlan, TrialRng};
use crate::outage::{CurveKind, OutageCurve};
use crate::uplink_mcp::Scheme;
use crate::uplink_scp::{exceedance_curve, gaussian_tail, sample_neighbourhood};
use crate::wyner::Calibration;

/// Rates use `log2(1 + min(SIR, SIR_CAP))` where a user can sit arbitrarily
/// close to its BS.
pub const SIR_CAP: f64 = 1e6;

/// Location of the tagged downlink user, units of R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserPosition {
    pub offset: f64,
}

impl UserPosition {
    pub fn new(offset: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&offset) {
            return Err(Error::Domain(format!("user offset {offset} outside [-1, 1]")));
        }
        Ok(Self { offset })
    }

    pub fn center() -> Self {
        Self { offset: 0.0 }
    }

    /// Right cell edge: distance R to the right BS, 3R to the left BS.
    pub fn edge() -> Self {
        Self { offset: 1.0 }
    }

    pub fn r_left(&self) -> f64 {
        2.0 + self.offset
    }

    pub fn r_right(&self) -> f64 {
        2.0 - self.offset
    }

    /// `(R/r_left)^p + (R/r_right)^p`.
    fn inverse_power_sum(&self, p: f64) -> f64 {
        self.r_left().powf(-p) + self.r_right().powf(-p)
    }
}

/// `q >= 1 - P[A <= 1/theta] P[B <= 1/theta]` with
/// `P[A <= 1/theta] = min(theta^{-1/beta} r_left / R, 1)`.
pub fn pci_tdma_outage_bound(beta: f64, pos: UserPosition, thresholds: &[f64]) -> OutageCurve {
    let values = thresholds
        .iter()
        .map(|&t| {
            let s = t.powf(-1.0 / beta);
            1.0 - (s * pos.r_left()).min(1.0) * (s * pos.r_right()).min(1.0)
        })
        .collect();
    OutageCurve::analytic(CurveKind::LowerBound, thresholds, values)
}

/// Per-trial PCI interference at the tagged user: `A + B` for TDMA (one
/// uniformly chosen interferer per neighbour cell) or `sum A_i + sum B_j`
/// for synchronous CDMA.
pub fn pci_interference_samples(cfg: &NetworkConfig, pos: UserPosition, plan: &RandomPlan, scheme: Scheme) -> Vec<f64> {
    plan.sample(|rng| pci_interference(cfg, pos, rng, scheme))
}

fn pci_interference(cfg: &NetworkConfig, pos: UserPosition, rng: &mut TrialRng, scheme: Scheme) -> f64 {
    let beta = cfg.pathloss_exp;
    let k = cfg.users_per_cell;
    let layout = sample_neighbourhood(cfg, rng);
    let a = |i: usize| downlink_factor_at(layout.r_home(0, i), pos.r_left(), beta);
    let b = |j: usize| downlink_factor_at(layout.r_home(2, j), pos.r_right(), beta);
    match scheme {
        Scheme::Tdma => {
            let i = rng.random_range(0..k);
            let j = rng.random_range(0..k);
            a(i) + b(j)
        }
        Scheme::Cdma => (0..k).map(|i| a(i) + b(i)).sum(),
    }
}

pub fn pci_tdma_outage_mc(cfg: &NetworkConfig, pos: UserPosition, thresholds: &[f64], plan: &RandomPlan) -> Result<OutageCurve> {
    let samples = pci_interference_samples(cfg, pos, plan, Scheme::Tdma);
    exceedance_curve(&samples, thresholds, |t| 1.0 / t)
}

pub fn pci_cdma_outage_mc(cfg: &NetworkConfig, pos: UserPosition, thresholds: &[f64], plan: &RandomPlan) -> Result<OutageCurve> {
    let g = cfg.spreading_gain;
    let samples = pci_interference_samples(cfg, pos, plan, Scheme::Cdma);
    exceedance_curve(&samples, thresholds, |t| g / t)
}

/// Mean and variance parameters of `K^{-1/2} (sum A_i + sum B_j)`; exact
/// for users uniform over the interfering cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DlGaussMoments {
    pub mu_r: f64,
    pub sigma_r_sq: f64,
}

pub fn dl_gauss_moments(beta: f64, k_users: usize, pos: UserPosition) -> DlGaussMoments {
    DlGaussMoments {
        mu_r: (k_users as f64).sqrt() / (beta + 1.0) * pos.inverse_power_sum(beta),
        sigma_r_sq: beta * beta / ((beta + 1.0).powi(2) * (2.0 * beta + 1.0)) * pos.inverse_power_sum(2.0 * beta),
    }
}

/// `Q((G/theta - sqrt(K) mu_r) / (sqrt(K) sigma_r))`.
pub fn pci_cdma_outage_gaussian(cfg: &NetworkConfig, pos: UserPosition, thresholds: &[f64]) -> OutageCurve {
    let k = cfg.users_per_cell as f64;
    let m = dl_gauss_moments(cfg.pathloss_exp, cfg.users_per_cell, pos);
    let sd = (k * m.sigma_r_sq).sqrt();
    let values = thresholds
        .iter()
        .map(|&t| gaussian_tail(cfg.spreading_gain / t - k.sqrt() * m.mu_r, sd))
        .collect();
    OutageCurve::analytic(CurveKind::GaussianApprox, thresholds, values)
}

/// Deterministic large-K SIR of a user at `pos`,
/// `G / (gamma alpha_dl^2 K [(R/r_left)^beta + (R/r_right)^beta])`.
pub fn pci_asymptotic_sir(cfg: &NetworkConfig, calibration: &Calibration, pos: UserPosition) -> f64 {
    let k = cfg.users_per_cell as f64;
    cfg.spreading_gain / (calibration.gamma * calibration.alpha_sq_dl * k * pos.inverse_power_sum(cfg.pathloss_exp))
}

/// Step outage of the asymptotic SIR.
pub fn pci_outage_asymptotic(cfg: &NetworkConfig, calibration: &Calibration, pos: UserPosition, thresholds: &[f64]) -> OutageCurve {
    let sir = pci_asymptotic_sir(cfg, calibration, pos);
    let values = thresholds.iter().map(|&t| if sir < t { 1.0 } else { 0.0 }).collect();
    OutageCurve::analytic(CurveKind::Asymptotic, thresholds, values)
}

pub fn capped_rate(sir: f64, k_users: usize, cap: f64) -> f64 {
    (1.0 + sir.min(cap)).log2() / (2.0 * k_users as f64)
}

/// Average PCI throughput over random target and interferer locations
/// (CDMA with `G = K`).
pub fn pci_avg_throughput(cfg: &NetworkConfig, plan: &RandomPlan, scheme: Scheme) -> Result<Estimate> {
    let k = cfg.users_per_cell;
    let eps = cfg.eps();
    let rates = plan.sample(|rng| {
        let pos = UserPosition { offset: sample_offset(rng, eps) };
        let x = pci_interference(cfg, pos, rng, scheme);
        let sir = match scheme {
            Scheme::Tdma => 1.0 / x,
            Scheme::Cdma => k as f64 / x,
        };
        capped_rate(sir, k, f64::INFINITY)
    });
    Estimate::from_samples(&rates)
}

/// ETP SIR `1 / (U + V)` of a user at `offset`; it depends on no other user.
pub fn etp_sir(offset: f64, beta: f64) -> f64 {
    let f = uplink_factors_at(offset, beta);
    1.0 / (f.u + f.v)
}

/// Average ETP throughput, identical for intracell TDMA and CDMA with `G = K`.
pub fn etp_avg_throughput(cfg: &NetworkConfig, plan: &RandomPlan, sir_cap: f64) -> Result<Estimate> {
    let k = cfg.users_per_cell;
    let eps = cfg.eps();
    let beta = cfg.pathloss_exp;
    let rates = plan.sample(|rng| capped_rate(etp_sir(sample_offset(rng, eps), beta), k, sir_cap));
    Estimate::from_samples(&rates)
}
