//! Downlink multicell processing: per-cell sum throughput lower bounds from
//! the minimax dual uplink with equal user powers, and their deterministic
//! many-user limit.

mod minimax;

pub use minimax::{minimax_diag_noise, minimax_diag_noise_with, minimax_objective, MinimaxSolution, SolverOptions};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::{NetworkConfig, Topology};
use crate::error::{Error, Result};
use crate::geometry::{downlink_gains_at, sample_layout, uplink_factors_at, UserLayout};
use crate::mc::{logdet_psd, quad1d, Estimate, RandomPlan};
use crate::wyner::pentadiagonal;

const QUAD_TOL: f64 = 1e-12;

/// `H^T`: one row per user (`cell * K + user`), one column per BS.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub entries: DMatrix<f64>,
    /// Amplitude factor `c` with `E[(c a)^2] = 1` for the home gain `a`.
    pub normalization: f64,
    users_per_cell: usize,
}

impl ChannelMatrix {
    pub fn n_cells(&self) -> usize {
        self.entries.ncols()
    }

    pub fn users_per_cell(&self) -> usize {
        self.users_per_cell
    }

    /// `H H^T`.
    pub fn hht(&self) -> DMatrix<f64> {
        self.entries.tr_mul(&self.entries)
    }

    /// `(1/(K N)) H H^T`, the CDMA gram with per-user power `1/(K N)`.
    pub fn gram_cdma(&self) -> DMatrix<f64> {
        self.hht() / (self.users_per_cell * self.n_cells()) as f64
    }

    /// `(1/N) H~ H~^T` for the slot in which user `slot` of every cell is active.
    pub fn gram_tdma_slot(&self, slot: usize) -> DMatrix<f64> {
        let n = self.n_cells();
        let rows: Vec<usize> = (0..n).map(|cell| cell * self.users_per_cell + slot).collect();
        let sub = self.entries.select_rows(&rows);
        sub.tr_mul(&sub) / n as f64
    }
}

/// Mean of `f(L)` for `L` uniform on `[-1, -eps] U [eps, 1]`.
fn position_mean(eps: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let left = quad1d(&f, -1.0, -eps, QUAD_TOL)?;
    let right = quad1d(&f, eps, 1.0, QUAD_TOL)?;
    Ok((left + right) / (2.0 * (1.0 - eps)))
}

fn require_exclusion(cfg: &NetworkConfig) -> Result<()> {
    if cfg.eps() <= 0.0 {
        return Err(Error::Config(
            "downlink multicell processing needs a positive exclusion radius".into(),
        ));
    }
    Ok(())
}

/// Amplitude normalisation `c = E[a^2]^{-1/2}`, by quadrature.
pub fn gain_normalization(cfg: &NetworkConfig) -> Result<f64> {
    require_exclusion(cfg)?;
    let (r0, beta) = (cfg.ref_dist_norm(), cfg.pathloss_exp);
    let m2 = position_mean(cfg.eps(), |l| downlink_gains_at(l, r0, beta).home.powi(2))?;
    Ok(1.0 / m2.sqrt())
}

/// Normalised channel of a layout; the constant comes from quadrature, not
/// from the sample.
pub fn build_channel(layout: &UserLayout, cfg: &NetworkConfig) -> Result<ChannelMatrix> {
    let c = gain_normalization(cfg)?;
    build_channel_with(layout, cfg, c)
}

pub fn build_channel_with(layout: &UserLayout, cfg: &NetworkConfig, normalization: f64) -> Result<ChannelMatrix> {
    if layout.eps() <= 0.0 {
        return Err(Error::Config("layout was drawn without an exclusion radius".into()));
    }
    let n = layout.n_cells();
    let k = layout.users_per_cell();
    let (r0, beta) = (cfg.ref_dist_norm(), cfg.pathloss_exp);
    let mut h = DMatrix::zeros(n * k, n);
    for cell in 0..n {
        for user in 0..k {
            let row = cell * k + user;
            let g = downlink_gains_at(layout.offset(cell, user), r0, beta);
            h[(row, cell)] += normalization * g.home;
            if let Some(l) = layout.left_of(cell) {
                h[(row, l)] += normalization * g.left;
            }
            if let Some(r) = layout.right_of(cell) {
                h[(row, r)] += normalization * g.right;
            }
        }
    }
    Ok(ChannelMatrix { entries: h, normalization, users_per_cell: k })
}

/// Deterministic limit of `(1/K) H H^T` on a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitMatrix {
    pub matrix: DMatrix<f64>,
    /// `E[a^2 (1 + U + V)]`.
    pub diag: f64,
    /// `E[a^2 sqrt(U)] + E[a^2 sqrt(V)]`.
    pub band1: f64,
    /// `E[a^2 sqrt(U V)]`.
    pub band2: f64,
}

pub fn limit_entries(cfg: &NetworkConfig) -> Result<[f64; 3]> {
    let c2 = gain_normalization(cfg)?.powi(2);
    let (r0, beta, eps) = (cfg.ref_dist_norm(), cfg.pathloss_exp, cfg.eps());
    let a2 = |l: f64| c2 * downlink_gains_at(l, r0, beta).home.powi(2);
    let diag = position_mean(eps, |l| {
        let f = uplink_factors_at(l, beta);
        a2(l) * (1.0 + f.u + f.v)
    })?;
    let band1 = position_mean(eps, |l| {
        let f = uplink_factors_at(l, beta);
        a2(l) * (f.u.sqrt() + f.v.sqrt())
    })?;
    let band2 = position_mean(eps, |l| {
        let f = uplink_factors_at(l, beta);
        a2(l) * (f.u * f.v).sqrt()
    })?;
    Ok([diag, band1, band2])
}

pub fn limit_matrix(cfg: &NetworkConfig) -> Result<LimitMatrix> {
    let [diag, band1, band2] = limit_entries(cfg)?;
    Ok(LimitMatrix {
        matrix: pentadiagonal(cfg.n_cells, [diag, band1, band2], Topology::Wraparound),
        diag,
        band1,
        band2,
    })
}

/// `(1/N) log2 det(I + S Lambda_bar)`.
pub fn sumthroughput_limit_cdma(cfg: &NetworkConfig) -> Result<f64> {
    limit_matrix(cfg)?.throughput(cfg.snr)
}

impl LimitMatrix {
    /// `(1/N) log2 det(I + snr Lambda_bar)`.
    pub fn throughput(&self, snr: f64) -> Result<f64> {
        let n = self.matrix.nrows();
        let m = DMatrix::identity(n, n) + &self.matrix * snr;
        Ok(logdet_psd(&m)? / (n as f64 * std::f64::consts::LN_2))
    }
}

/// `max |(1/K) H H^T - Lambda_bar|` over all entries.
pub fn limit_error(channel: &ChannelMatrix, limit: &LimitMatrix) -> f64 {
    let k = channel.users_per_cell() as f64;
    (channel.hht() / k - &limit.matrix).amax()
}

const SOLVER_TOL: f64 = 1e-8;

fn per_cell(gram: &DMatrix<f64>, snr: f64) -> Result<f64> {
    let sol = minimax_diag_noise(gram, snr, SOLVER_TOL)?.require_converged()?;
    Ok(sol.value / gram.nrows() as f64)
}

/// CDMA lower bound of one channel draw, bits per cell.
pub fn lower_bound_cdma(channel: &ChannelMatrix, snr: f64) -> Result<f64> {
    per_cell(&channel.gram_cdma(), snr)
}

/// TDMA lower bound of one channel draw, time-shared over the `K` slots in
/// which user `k` of every cell is served.
pub fn lower_bound_tdma(channel: &ChannelMatrix, snr: f64) -> Result<f64> {
    let k = channel.users_per_cell();
    let mut total = 0.0;
    for slot in 0..k {
        total += per_cell(&channel.gram_tdma_slot(slot), snr)?;
    }
    Ok(total / k as f64)
}

/// Paired per-draw lower bounds on the same channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundDraw {
    pub tdma: f64,
    pub cdma: f64,
}

fn draws<T: Send>(
    cfg: &NetworkConfig,
    plan: &RandomPlan,
    eval: impl Fn(&ChannelMatrix) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let c = gain_normalization(cfg)?;
    plan.sample(|rng| {
        let layout = sample_layout(cfg, rng);
        eval(&build_channel_with(&layout, cfg, c)?)
    })
    .into_iter()
    .collect()
}

pub fn lower_bound_draws(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Vec<BoundDraw>> {
    draws(cfg, plan, |h| {
        Ok(BoundDraw { tdma: lower_bound_tdma(h, cfg.snr)?, cdma: lower_bound_cdma(h, cfg.snr)? })
    })
}

pub fn sumthroughput_lower_cdma(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Estimate> {
    Estimate::from_samples(&draws(cfg, plan, |h| lower_bound_cdma(h, cfg.snr))?)
}

pub fn sumthroughput_lower_tdma(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Estimate> {
    Estimate::from_samples(&draws(cfg, plan, |h| lower_bound_tdma(h, cfg.snr))?)
}

/// Mean over draws of [`limit_error`].
pub fn mean_limit_error(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<f64> {
    let limit = limit_matrix(cfg)?;
    let errs = draws(cfg, plan, |h| Ok(limit_error(h, &limit)))?;
    Ok(errs.iter().sum::<f64>() / errs.len() as f64)
}
