use serde::{Deserialize, Serialize};

use crate::mc::{Estimate, Z95};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Mc,
    LowerBound,
    GaussianApprox,
    Asymptotic,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Mc => "mc",
            CurveKind::LowerBound => "lower_bound",
            CurveKind::GaussianApprox => "gaussian_approx",
            CurveKind::Asymptotic => "asymptotic",
        }
    }
}

/// Outage probability against linear SIR threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageCurve {
    pub kind: CurveKind,
    pub thresholds: Vec<f64>,
    pub values: Vec<f64>,
    /// Zero for analytic curves.
    pub std_errs: Vec<f64>,
}

impl OutageCurve {
    pub fn analytic(kind: CurveKind, thresholds: &[f64], values: Vec<f64>) -> Self {
        let n = values.len();
        Self {
            kind,
            thresholds: thresholds.to_vec(),
            values,
            std_errs: vec![0.0; n],
        }
    }

    pub fn from_estimates(thresholds: &[f64], estimates: &[Estimate]) -> Self {
        Self {
            kind: CurveKind::Mc,
            thresholds: thresholds.to_vec(),
            values: estimates.iter().map(|e| e.mean).collect(),
            std_errs: estimates.iter().map(|e| e.std_err).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ci95(&self, i: usize) -> (f64, f64) {
        let half = Z95 * self.std_errs[i];
        (self.values[i] - half, self.values[i] + half)
    }

    /// Largest pointwise absolute difference to another curve on the same grid.
    pub fn max_abs_diff(&self, other: &OutageCurve) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// First threshold at which the curve reaches `level`, linearly
    /// interpolated in log-threshold.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let i = self.values.iter().position(|&v| v >= level)?;
        if i == 0 {
            return Some(self.thresholds[0]);
        }
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let (t0, t1) = (self.thresholds[i - 1].ln(), self.thresholds[i].ln());
        let w = if v1 > v0 { (level - v0) / (v1 - v0) } else { 1.0 };
        Some((t0 + w * (t1 - t0)).exp())
    }
}

/// Logarithmically spaced linear thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdGrid {
    pub thresholds: Vec<f64>,
}

impl ThresholdGrid {
    pub const DEFAULT_POINTS: usize = 50;

    pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Self {
        assert!(lo > 0.0 && hi > lo && points >= 2, "bad grid [{lo}, {hi}] x {points}");
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (points - 1) as f64;
        Self {
            thresholds: (0..points).map(|i| (a + step * i as f64).exp()).collect(),
        }
    }

    /// Grid between two thresholds given in dB.
    pub fn db_range(lo_db: f64, hi_db: f64, points: usize) -> Self {
        Self::log_spaced(10f64.powf(lo_db / 10.0), 10f64.powf(hi_db / 10.0), points)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.thresholds
    }
}
