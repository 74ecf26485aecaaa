use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How cells at the ends of the array are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// Cells on a line; the first and last cell have a single neighbour.
    Linear,
    /// Cells on a ring, so every cell has two neighbours.
    #[default]
    Wraparound,
}

/// Every scenario parameter of the random-location network.
///
/// Lengths (`cell_half_width`, `exclusion_radius`, `ref_dist`) share one unit;
/// only their ratios to `cell_half_width` enter any computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n_cells: usize,
    pub users_per_cell: usize,
    pub cell_half_width: f64,
    pub pathloss_exp: f64,
    pub spreading_gain: f64,
    /// Linear SNR `P / sigma^2`.
    pub snr: f64,
    /// Linear SIR threshold.
    pub sir_threshold: f64,
    pub exclusion_radius: f64,
    pub ofdma_interferers: usize,
    /// Received-power reference distance for the downlink gains.
    pub ref_dist: f64,
    pub topology: Topology,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            n_cells: 64,
            users_per_cell: 50,
            cell_half_width: 1.0,
            pathloss_exp: 4.0,
            spreading_gain: 64.0,
            snr: 10.0,
            sir_threshold: db_to_linear(6.0),
            exclusion_radius: 0.01,
            ofdma_interferers: 1,
            ref_dist: 1.0,
            topology: Topology::Wraparound,
            seed: 1,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_cells == 0 {
            return bad("n_cells must be positive".into());
        }
        if self.users_per_cell == 0 {
            return bad("users_per_cell must be positive".into());
        }
        if !(self.cell_half_width > 0.0 && self.cell_half_width.is_finite()) {
            return bad(format!("cell_half_width must be positive, got {}", self.cell_half_width));
        }
        if !(self.pathloss_exp >= 2.0 && self.pathloss_exp.is_finite()) {
            return bad(format!("pathloss exponent must be >= 2, got {}", self.pathloss_exp));
        }
        if !(self.spreading_gain > 0.0) {
            return bad(format!("spreading gain must be positive, got {}", self.spreading_gain));
        }
        if !(self.snr > 0.0) {
            return bad(format!("snr must be positive, got {}", self.snr));
        }
        if !(self.sir_threshold > 0.0) {
            return bad(format!("sir threshold must be positive, got {}", self.sir_threshold));
        }
        if !(self.exclusion_radius >= 0.0 && self.exclusion_radius < self.cell_half_width) {
            return bad(format!(
                "exclusion radius must lie in [0, R), got {} with R = {}",
                self.exclusion_radius, self.cell_half_width
            ));
        }
        if self.ofdma_interferers == 0 || self.ofdma_interferers > self.users_per_cell {
            return bad(format!(
                "ofdma interferers must lie in [1, K = {}], got {}",
                self.users_per_cell, self.ofdma_interferers
            ));
        }
        if !(self.ref_dist > 0.0) {
            return bad(format!("reference distance must be positive, got {}", self.ref_dist));
        }
        Ok(())
    }

    /// Exclusion radius in units of R.
    pub fn eps(&self) -> f64 {
        self.exclusion_radius / self.cell_half_width
    }

    /// Reference distance in units of R.
    pub fn ref_dist_norm(&self) -> f64 {
        self.ref_dist / self.cell_half_width
    }

    pub fn with_cells(&self, n_cells: usize) -> Self {
        Self { n_cells, ..self.clone() }
    }

    pub fn with_users(&self, users_per_cell: usize) -> Self {
        Self {
            users_per_cell,
            ofdma_interferers: self.ofdma_interferers.min(users_per_cell),
            ..self.clone()
        }
    }

    pub fn with_beta(&self, pathloss_exp: f64) -> Self {
        Self { pathloss_exp, ..self.clone() }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        NetworkConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let base = NetworkConfig::default();
        for cfg in [
            NetworkConfig { pathloss_exp: 1.5, ..base.clone() },
            NetworkConfig { exclusion_radius: 1.0, ..base.clone() },
            NetworkConfig { exclusion_radius: -0.1, ..base.clone() },
            NetworkConfig { ofdma_interferers: 0, ..base.clone() },
            NetworkConfig { ofdma_interferers: 51, ..base.clone() },
            NetworkConfig { users_per_cell: 0, ..base.clone() },
            NetworkConfig { snr: 0.0, ..base.clone() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((linear_to_db(100.0) - 20.0).abs() < 1e-12);
    }
}
