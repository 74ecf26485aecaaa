//! Uplink multicell processing: per-cell average throughput under joint
//! decoding, `(1/(KN)) log2 det(Lambda_N)` of the received-signal covariance.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::NetworkConfig;
use crate::error::Result;
use crate::geometry::{sample_layout, uplink_factors, UserLayout};
use crate::mc::{logdet_psd_detailed, Estimate, RandomPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Tdma,
    Cdma,
}

/// Normalised covariance `Lambda_N` of the BS received signals.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSpec {
    pub matrix: DMatrix<f64>,
    pub scheme: Scheme,
    pub snr: f64,
    pub users: usize,
}

/// Adds the five-band contribution `power * h h^T` of one user in `cell`,
/// where `h` has 1 at the home BS, `sqrt(U)` at the right BS and `sqrt(V)` at
/// the left BS. Neighbours missing from a linear array are dropped.
fn add_user(m: &mut DMatrix<f64>, layout: &UserLayout, cell: usize, user: usize, beta: f64, power: f64) {
    let f = uplink_factors(layout, cell, user, beta);
    let (su, sv) = (f.u.sqrt(), f.v.sqrt());
    let right = layout.right_of(cell);
    let left = layout.left_of(cell);
    m[(cell, cell)] += power;
    if let Some(r) = right {
        m[(r, r)] += power * f.u;
        m[(cell, r)] += power * su;
        m[(r, cell)] += power * su;
    }
    if let Some(l) = left {
        m[(l, l)] += power * f.v;
        m[(cell, l)] += power * sv;
        m[(l, cell)] += power * sv;
    }
    if let (Some(l), Some(r)) = (left, right) {
        m[(l, r)] += power * su * sv;
        m[(r, l)] += power * su * sv;
    }
}

/// Intracell TDMA covariance with `active[n]` transmitting in cell `n` at
/// per-user SNR `K S`.
pub fn build_cov_tdma_slot(layout: &UserLayout, cfg: &NetworkConfig, active: &[usize]) -> CovSpec {
    let n = layout.n_cells();
    let k = layout.users_per_cell();
    let power = k as f64 * cfg.snr;
    let mut m = DMatrix::identity(n, n);
    for (cell, &user) in active.iter().enumerate() {
        add_user(&mut m, layout, cell, user, cfg.pathloss_exp, power);
    }
    CovSpec { matrix: m, scheme: Scheme::Tdma, snr: cfg.snr, users: k }
}

/// TDMA covariance with one independently chosen active user per cell.
pub fn build_cov_tdma<R: Rng + ?Sized>(layout: &UserLayout, cfg: &NetworkConfig, rng: &mut R) -> CovSpec {
    let k = layout.users_per_cell();
    let active: Vec<usize> = (0..layout.n_cells()).map(|_| rng.random_range(0..k)).collect();
    build_cov_tdma_slot(layout, cfg, &active)
}

/// CDMA covariance: every user of every cell transmits at SNR `S`.
pub fn build_cov_cdma(layout: &UserLayout, cfg: &NetworkConfig) -> CovSpec {
    let n = layout.n_cells();
    let k = layout.users_per_cell();
    let mut m = DMatrix::identity(n, n);
    for cell in 0..n {
        for user in 0..k {
            add_user(&mut m, layout, cell, user, cfg.pathloss_exp, cfg.snr);
        }
    }
    CovSpec { matrix: m, scheme: Scheme::Cdma, snr: cfg.snr, users: k }
}

/// Throughput of one layout draw plus the number of clamped eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerCell {
    pub bits: f64,
    pub clamped: usize,
}

/// `(1/(KN)) log2 det(Lambda_N)` for one layout draw, bits per use per user.
pub fn percell_throughput(cov: &CovSpec) -> Result<PerCell> {
    let d = logdet_psd_detailed(&cov.matrix)?;
    let n = cov.matrix.nrows() as f64;
    Ok(PerCell {
        bits: d.ln / (cov.users as f64 * n * std::f64::consts::LN_2),
        clamped: d.clamped,
    })
}

/// TDMA throughput of a draw, time-shared over the `K` slots in which user
/// `k` of every cell is active.
pub fn tdma_slot_average(layout: &UserLayout, cfg: &NetworkConfig) -> Result<f64> {
    let n = layout.n_cells();
    let k = layout.users_per_cell();
    let mut total = 0.0;
    for slot in 0..k {
        total += percell_throughput(&build_cov_tdma_slot(layout, cfg, &vec![slot; n]))?.bits;
    }
    Ok(total / k as f64)
}

/// Paired per-draw throughputs of the two schemes on the same layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McpDraw {
    pub tdma: f64,
    pub cdma: f64,
}

pub fn mcp_draws(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Vec<McpDraw>> {
    plan.sample(|rng| {
        let layout = sample_layout(cfg, rng);
        Ok(McpDraw {
            tdma: tdma_slot_average(&layout, cfg)?,
            cdma: percell_throughput(&build_cov_cdma(&layout, cfg))?.bits,
        })
    })
    .into_iter()
    .collect()
}

pub fn avg_throughput(cfg: &NetworkConfig, plan: &RandomPlan, scheme: Scheme) -> Result<Estimate> {
    let values: Vec<f64> = plan
        .sample(|rng| {
            let layout = sample_layout(cfg, rng);
            let cov = match scheme {
                Scheme::Tdma => build_cov_tdma(&layout, cfg, rng),
                Scheme::Cdma => build_cov_cdma(&layout, cfg),
            };
            percell_throughput(&cov).map(|p| p.bits)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    Estimate::from_samples(&values)
}
