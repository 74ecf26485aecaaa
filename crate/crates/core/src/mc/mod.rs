//! Shared numerical substrate: seeded random streams, Monte Carlo estimates,
//! the Gaussian Q-function, PSD log-determinants and 1-D quadrature.

mod linalg;
mod quad;
mod special;

pub use linalg::{logdet_cholesky, logdet_psd, logdet_psd_detailed, LogDet};
pub use quad::{quad1d, quad1d_split};
pub use special::qfunc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub type TrialRng = ChaCha8Rng;

/// Master seed plus trial count. Trial `i` always draws from ChaCha stream `i`
/// of the master key, so results do not depend on how trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomPlan {
    pub master_seed: u64,
    pub trials: usize,
}

impl RandomPlan {
    pub fn new(master_seed: u64, trials: usize) -> Self {
        Self { master_seed, trials }
    }

    pub fn stream(&self, trial: usize) -> TrialRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// Independent plan for a named sub-experiment.
    pub fn derive(&self, tag: u64) -> Self {
        Self {
            master_seed: splitmix64(self.master_seed ^ splitmix64(tag.wrapping_add(0x9e37_79b9))),
            trials: self.trials,
        }
    }

    pub fn with_trials(&self, trials: usize) -> Self {
        Self { trials, ..*self }
    }

    /// Evaluates `sampler` once per trial, in parallel, returning results in
    /// trial order.
    pub fn sample<T, F>(&self, sampler: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&mut TrialRng) -> T + Sync,
    {
        (0..self.trials)
            .into_par_iter()
            .map(|i| sampler(&mut self.stream(i)))
            .collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Monte Carlo mean with a normal-approximation 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials: usize,
}

impl Estimate {
    /// Summarises samples. Sums run sequentially in slice order, so the
    /// result is bit-reproducible for a given sample vector.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::ZeroTrials);
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Ok(Self::from_moments(mean, (var / n as f64).sqrt(), n))
    }

    pub fn from_moments(mean: f64, std_err: f64, trials: usize) -> Self {
        Self {
            mean,
            std_err,
            ci95_low: mean - Z95 * std_err,
            ci95_high: mean + Z95 * std_err,
            trials,
        }
    }

    /// Proportion estimate from a success count.
    pub fn from_count(hits: usize, trials: usize) -> Result<Self> {
        if trials == 0 {
            return Err(Error::ZeroTrials);
        }
        let p = hits as f64 / trials as f64;
        // unbiased sample variance of a 0/1 variable
        let var = if trials > 1 {
            p * (1.0 - p) * trials as f64 / (trials - 1) as f64
        } else {
            0.0
        };
        Ok(Self::from_moments(p, (var / trials as f64).sqrt(), trials))
    }

    /// Same interval with every field multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::from_moments(self.mean * c, self.std_err * c, self.trials)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci95_low <= x && x <= self.ci95_high
    }
}

pub fn mc_estimate<F>(sampler: F, plan: &RandomPlan) -> Result<Estimate>
where
    F: Fn(&mut TrialRng) -> f64 + Sync,
{
    if plan.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    Estimate::from_samples(&plan.sample(sampler))
}
