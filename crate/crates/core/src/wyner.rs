//! Closed-form Wyner-model quantities and the calibration of the Wyner
//! interference intensity from the random-location model.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Topology;
use crate::error::{Error, Result};
use crate::geometry::uplink_factors_at;
use crate::mc::{logdet_psd, quad1d_split};

const QUAD_TOL: f64 = 1e-13;

/// Which value of `E[U]` (and `Var[U]`) feeds a Wyner comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSource {
    /// `E[U] ~ E[|L|^beta] / d^beta = 1 / ((beta + 1) 2^beta)`.
    ClosedForm,
    /// Quadrature of the exact expectation over the user position.
    #[default]
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub beta: f64,
    pub eps: f64,
    /// Closed-form approximation of `E[U]`.
    pub alpha_sq_ul: f64,
    /// `E[A]` for the downlink with perfect channel inversion.
    pub alpha_sq_dl: f64,
    pub gamma: f64,
    /// Closed-form approximation of `2 Var[U]`.
    pub sigma_u_sq: f64,
    pub exact_alpha_sq_ul: f64,
    pub exact_sigma_u_sq: f64,
}

/// Per interferer-pair mean and variance of `U + V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMoments {
    pub mean: f64,
    pub var: f64,
}

impl Calibration {
    pub fn alpha_sq(&self, source: MomentSource) -> f64 {
        match source {
            MomentSource::ClosedForm => self.alpha_sq_ul,
            MomentSource::Exact => self.exact_alpha_sq_ul,
        }
    }

    /// Mean of `K^{-1/2} sum_k (U_k + V_k)`.
    pub fn mu(&self, k: usize, source: MomentSource) -> f64 {
        2.0 * (k as f64).sqrt() * self.alpha_sq(source)
    }

    pub fn pair_moments(&self, source: MomentSource) -> PairMoments {
        match source {
            MomentSource::ClosedForm => PairMoments { mean: 2.0 * self.alpha_sq_ul, var: self.sigma_u_sq },
            MomentSource::Exact => PairMoments {
                mean: 2.0 * self.exact_alpha_sq_ul,
                var: self.exact_sigma_u_sq,
            },
        }
    }
}

/// Calibrates the Wyner parameters for pathloss exponent `beta` with users
/// uniform on `[-1, -eps] U [eps, 1]` (units of R).
pub fn calibrate(beta: f64, eps: f64) -> Result<Calibration> {
    if !(beta >= 2.0) {
        return Err(Error::Config(format!("pathloss exponent must be >= 2, got {beta}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Config(format!("exclusion radius must lie in [0, 1), got {eps}")));
    }
    let two_b = 2f64.powf(beta);
    let alpha_sq_ul = 1.0 / ((beta + 1.0) * two_b);
    let gamma_inv = (1.0 - 3f64.powf(1.0 - beta)) / (2.0 * (beta - 1.0));
    let sigma_u_sq =
        2.0 / (two_b * two_b) * (1.0 / (2.0 * beta + 1.0) - 1.0 / (beta + 1.0).powi(2));

    let mean_of = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let w = 1.0 / (2.0 * (1.0 - eps));
        let left = quad1d_split(f, -1.0, -eps, &[], QUAD_TOL)?;
        let right = quad1d_split(f, eps, 1.0, &[], QUAD_TOL)?;
        Ok(w * (left + right))
    };
    let eu = mean_of(&|l| uplink_factors_at(l, beta).u)?;
    let eu2 = mean_of(&|l| uplink_factors_at(l, beta).u.powi(2))?;

    Ok(Calibration {
        beta,
        eps,
        alpha_sq_ul,
        alpha_sq_dl: gamma_inv / (beta + 1.0),
        gamma: 1.0 / gamma_inv,
        sigma_u_sq,
        exact_alpha_sq_ul: eu,
        exact_sigma_u_sq: 2.0 * (eu2 - eu * eu),
    })
}

/// Deterministic Wyner SIR; infinite when there is no interference.
pub fn wyner_sir(alpha_sq: f64) -> f64 {
    if alpha_sq == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * alpha_sq)
    }
}

/// Average per-user throughput of intracell TDMA/CDMA under the Wyner model,
/// bits per channel use.
pub fn wyner_avg_throughput(alpha_sq: f64, k_users: usize) -> f64 {
    (1.0 + wyner_sir(alpha_sq)).log2() / (2.0 * k_users as f64)
}

/// Symmetric pentadiagonal matrix with `bands[d]` on the `d`-th diagonals.
/// Entries that fall on the same position of a small ring are summed.
pub(crate) fn pentadiagonal(n_cells: usize, bands: [f64; 3], topology: Topology) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n_cells, n_cells);
    let n = n_cells as isize;
    for i in 0..n {
        for (off, &value) in bands.iter().enumerate() {
            let off = off as isize;
            let offsets: &[isize] = if off == 0 { &[0] } else { &[off, -off] };
            for &o in offsets {
                let j = i + o;
                let j = match topology {
                    Topology::Wraparound => j.rem_euclid(n),
                    Topology::Linear if (0..n).contains(&j) => j,
                    Topology::Linear => continue,
                };
                m[(i as usize, j as usize)] += value;
            }
        }
    }
    m
}

/// Pentadiagonal `Lambda_0`: `1 + 2a^2` on the diagonal, `2a` on the first
/// and `a^2` on the second off-diagonals.
pub fn wyner_lambda0(n_cells: usize, alpha: f64, topology: Topology) -> DMatrix<f64> {
    pentadiagonal(n_cells, [1.0 + 2.0 * alpha * alpha, 2.0 * alpha, alpha * alpha], topology)
}

/// Per-cell MCP sum throughput `(1/N) log2 det(I + S Lambda_0)` on a ring of
/// `n_cells` cells, the finite-N surrogate of the infinite-array limit.
pub fn wyner_mcp_throughput(n_cells: usize, alpha: f64, snr: f64) -> Result<f64> {
    let lambda = wyner_lambda0(n_cells, alpha, Topology::Wraparound);
    let m = DMatrix::identity(n_cells, n_cells) + lambda * snr;
    Ok(logdet_psd(&m)? / (n_cells as f64 * std::f64::consts::LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_calibration_values() {
        let c = calibrate(4.0, 0.0).unwrap();
        assert!((c.alpha_sq_ul - 0.0125).abs() < 1e-15);
        assert!((1.0 / c.gamma - 26.0 / 162.0).abs() < 1e-15);
        assert!((c.alpha_sq_dl - 0.032_098_765_432_098_77).abs() < 1e-12);
        assert!((calibrate(2.0, 0.0).unwrap().alpha_sq_ul - 1.0 / 12.0).abs() < 1e-15);
        assert!(c.sigma_u_sq > 0.0 && c.exact_sigma_u_sq > 0.0);
    }

    #[test]
    fn exact_mean_matches_independent_closed_form() {
        // beta = 2: E[U] = 1/2 [ int_0^1 x^2/(2-x)^2 dx + int_0^1 x^2/(2+x)^2 dx ]
        let anti_minus = |x: f64| {
            // d/dx of this is x^2/(2-x)^2
            x + 4.0 * (2.0 - x).ln() + 4.0 / (2.0 - x)
        };
        let anti_plus = |x: f64| x - 4.0 * (2.0 + x).ln() - 4.0 / (2.0 + x);
        let expected =
            0.5 * ((anti_minus(1.0) - anti_minus(0.0)) + (anti_plus(1.0) - anti_plus(0.0)));
        let c = calibrate(2.0, 0.0).unwrap();
        assert!((c.exact_alpha_sq_ul - expected).abs() < 1e-12, "{} vs {expected}", c.exact_alpha_sq_ul);
    }

    #[test]
    fn rejects_small_beta() {
        assert!(matches!(calibrate(1.9, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn alpha_sq_decreases_with_beta() {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let a = calibrate(2.0 + 0.25 * i as f64, 0.0).unwrap();
            assert!(a.alpha_sq_ul < prev);
            assert!(a.exact_alpha_sq_ul < 1.0);
            prev = a.alpha_sq_ul;
        }
    }

    #[test]
    fn sir_and_throughput_examples() {
        assert!((wyner_sir(0.0125) - 40.0).abs() < 1e-12);
        assert_eq!(wyner_sir(0.5), 1.0);
        assert!((wyner_sir(1.0 / 12.0) - 6.0).abs() < 1e-12);
        assert_eq!(wyner_sir(0.0), f64::INFINITY);
        assert!((wyner_avg_throughput(0.0125, 1) - 0.5 * 41f64.log2()).abs() < 1e-12);
        assert!((wyner_avg_throughput(0.0125, 1) - 2.678776).abs() < 1e-6);
        assert!(wyner_avg_throughput(1e12, 1) < 1e-11);
        let ratio = wyner_avg_throughput(0.03, 10) / wyner_avg_throughput(0.03, 1);
        assert!((ratio - 0.1).abs() < 1e-15);
    }

    #[test]
    fn lambda0_structure() {
        assert_eq!(wyner_lambda0(8, 0.0, Topology::Wraparound), DMatrix::identity(8, 8));
        let a = 0.1118;
        let m = wyner_lambda0(12, a, Topology::Linear);
        assert!((m[(5, 5)] - 1.025).abs() < 1e-4);
        assert!((m[(5, 6)] - 0.2236).abs() < 1e-12);
        assert!((m[(5, 7)] - 0.0125).abs() < 1e-4);
        assert_eq!(m[(5, 8)], 0.0);
        let row: f64 = m.row(5).iter().sum();
        assert!((row - (1.0 + 2.0 * a * a + 4.0 * a + 2.0 * a * a)).abs() < 1e-14);
        assert_eq!(m, m.transpose());
        let ring = wyner_lambda0(12, a, Topology::Wraparound);
        assert!((ring[(0, 11)] - 2.0 * a).abs() < 1e-15);
        assert!((ring[(0, 10)] - a * a).abs() < 1e-15);
    }

    #[test]
    fn lambda0_is_psd() {
        for i in 0..=20 {
            let a = i as f64 / 20.0;
            let eig = wyner_lambda0(16, a, Topology::Wraparound).symmetric_eigen();
            assert!(eig.eigenvalues.iter().all(|&l| l > -1e-12), "alpha {a}");
        }
    }

    #[test]
    fn mcp_throughput_examples() {
        let s = 10.0;
        assert!((wyner_mcp_throughput(32, 0.0, s).unwrap() - 11f64.log2()).abs() < 1e-12);
        assert!(wyner_mcp_throughput(32, 0.2, 1e-12).unwrap() < 1e-10);
        let a = 0.1118;
        let small = wyner_mcp_throughput(64, a, s).unwrap();
        let large = wyner_mcp_throughput(256, a, s).unwrap();
        assert!((small - large).abs() < 1e-6);
    }

    #[test]
    fn mcp_throughput_monotone_and_bounded() {
        let a = 0.25;
        let mut prev = 0.0;
        for i in 0..30 {
            let s = 10f64.powf(-1.0 + 0.1 * i as f64);
            let c = wyner_mcp_throughput(32, a, s).unwrap();
            assert!(c > prev);
            let lambda_min = (1.0f64 - 2.0 * a).powi(2);
            assert!(c >= (1.0 + s * lambda_min).log2() - 1e-12);
            prev = c;
        }
    }
}
