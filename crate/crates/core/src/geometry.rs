//! Cell layout, random user placement and every location-derived factor.
//!
//! Offsets are stored in units of the cell half-width `R`: a user at offset
//! `l` sits at distance `|l|` from its home BS, `2 + l` from the left
//! neighbour BS and `2 - l` from the right neighbour BS.

use rand::Rng;

use crate::config::{NetworkConfig, Topology};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct UserLayout {
    n_cells: usize,
    users_per_cell: usize,
    /// Row-major `n_cells x users_per_cell`, units of R.
    offsets: Vec<f64>,
    cell_half_width: f64,
    eps: f64,
    topology: Topology,
}

/// Draws one offset uniformly from `[-1, -eps] U [eps, 1]` by rejection.
pub fn sample_offset<R: Rng + ?Sized>(rng: &mut R, eps: f64) -> f64 {
    loop {
        let l = 2.0 * rng.random::<f64>() - 1.0;
        if l.abs() >= eps {
            return l;
        }
    }
}

pub fn sample_layout<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> UserLayout {
    let eps = cfg.eps();
    let offsets = (0..cfg.n_cells * cfg.users_per_cell)
        .map(|_| sample_offset(rng, eps))
        .collect();
    UserLayout {
        n_cells: cfg.n_cells,
        users_per_cell: cfg.users_per_cell,
        offsets,
        cell_half_width: cfg.cell_half_width,
        eps,
        topology: cfg.topology,
    }
}

impl UserLayout {
    /// Layout with prescribed offsets (units of R), one row per cell.
    pub fn from_offsets(cfg: &NetworkConfig, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != cfg.n_cells || rows.iter().any(|r| r.len() != cfg.users_per_cell) {
            return Err(Error::Domain(format!(
                "expected {} cells of {} users",
                cfg.n_cells, cfg.users_per_cell
            )));
        }
        let offsets: Vec<f64> = rows.iter().flatten().copied().collect();
        if let Some(bad) = offsets.iter().find(|l| l.abs() > 1.0) {
            return Err(Error::Domain(format!("offset {bad} outside [-1, 1]")));
        }
        Ok(Self {
            n_cells: cfg.n_cells,
            users_per_cell: cfg.users_per_cell,
            offsets,
            cell_half_width: cfg.cell_half_width,
            eps: cfg.eps(),
            topology: cfg.topology,
        })
    }

    /// Every user of every cell at the same offset.
    pub fn uniform(cfg: &NetworkConfig, offset: f64) -> Result<Self> {
        Self::from_offsets(cfg, &vec![vec![offset; cfg.users_per_cell]; cfg.n_cells])
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn users_per_cell(&self) -> usize {
        self.users_per_cell
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Signed offset from the home BS, units of R.
    pub fn offset(&self, cell: usize, user: usize) -> f64 {
        self.offsets[cell * self.users_per_cell + user]
    }

    /// Signed offset in absolute length units.
    pub fn position(&self, cell: usize, user: usize) -> f64 {
        self.offset(cell, user) * self.cell_half_width
    }

    pub fn cell_offsets(&self, cell: usize) -> &[f64] {
        &self.offsets[cell * self.users_per_cell..(cell + 1) * self.users_per_cell]
    }

    pub fn r_home(&self, cell: usize, user: usize) -> f64 {
        self.offset(cell, user).abs()
    }

    pub fn r_left(&self, cell: usize, user: usize) -> f64 {
        2.0 + self.offset(cell, user)
    }

    pub fn r_right(&self, cell: usize, user: usize) -> f64 {
        2.0 - self.offset(cell, user)
    }

    pub fn left_of(&self, cell: usize) -> Option<usize> {
        match (self.topology, cell) {
            (Topology::Linear, 0) => None,
            (Topology::Wraparound, 0) => Some(self.n_cells - 1),
            _ => Some(cell - 1),
        }
    }

    pub fn right_of(&self, cell: usize) -> Option<usize> {
        if cell + 1 < self.n_cells {
            Some(cell + 1)
        } else {
            match self.topology {
                Topology::Linear => None,
                Topology::Wraparound => Some(0),
            }
        }
    }
}

/// Interference ratios of a user towards its neighbour BSs under perfect
/// uplink channel inversion: `u` towards the right BS, `v` towards the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UplinkFactors {
    pub u: f64,
    pub v: f64,
}

pub fn uplink_factors_at(offset: f64, beta: f64) -> UplinkFactors {
    let r = offset.abs();
    UplinkFactors {
        u: (r / (2.0 - offset)).powf(beta),
        v: (r / (2.0 + offset)).powf(beta),
    }
}

pub fn uplink_factors(layout: &UserLayout, cell: usize, user: usize, beta: f64) -> UplinkFactors {
    uplink_factors_at(layout.offset(cell, user), beta)
}

/// Downlink PCI ratio `(interferer home distance / target-to-interfering-BS
/// distance)^beta` for an interferer in a cell adjacent to the target.
pub fn downlink_factor(
    layout: &UserLayout,
    target_cell: usize,
    target_user: usize,
    interferer_cell: usize,
    interferer_user: usize,
    beta: f64,
) -> Result<f64> {
    let r_cross = if layout.left_of(target_cell) == Some(interferer_cell) {
        layout.r_left(target_cell, target_user)
    } else if layout.right_of(target_cell) == Some(interferer_cell) {
        layout.r_right(target_cell, target_user)
    } else {
        return Err(Error::Domain(format!(
            "cell {interferer_cell} is not adjacent to cell {target_cell}"
        )));
    };
    Ok(downlink_factor_at(layout.r_home(interferer_cell, interferer_user), r_cross, beta))
}

pub fn downlink_factor_at(interferer_home: f64, r_cross: f64, beta: f64) -> f64 {
    (interferer_home / r_cross).powf(beta)
}

/// Amplitude gains from the home, left and right BS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkGains {
    pub home: f64,
    pub left: f64,
    pub right: f64,
}

pub fn downlink_gains_at(offset: f64, ref_dist: f64, beta: f64) -> DownlinkGains {
    let h = 0.5 * beta;
    DownlinkGains {
        home: (ref_dist / offset.abs()).powf(h),
        left: (ref_dist / (2.0 + offset)).powf(h),
        right: (ref_dist / (2.0 - offset)).powf(h),
    }
}

/// `ref_dist` is in units of R. Requires a layout drawn with a positive
/// exclusion radius, otherwise the home gain has no finite moments.
pub fn downlink_gains(
    layout: &UserLayout,
    cell: usize,
    user: usize,
    ref_dist: f64,
    beta: f64,
) -> Result<DownlinkGains> {
    if layout.eps() <= 0.0 {
        return Err(Error::Config(
            "downlink channel gains need a positive exclusion radius".into(),
        ));
    }
    Ok(downlink_gains_at(layout.offset(cell, user), ref_dist, beta))
}
