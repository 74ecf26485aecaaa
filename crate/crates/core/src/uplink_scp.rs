//! Uplink single-cell processing: outage and average throughput of intracell
//! TDMA and asynchronous CDMA under perfect uplink channel inversion.
//!
//! Noise is ignored (interference-limited). Only the two cells adjacent to
//! the tagged BS matter, so each trial samples a three-cell neighbourhood.

use rand::Rng;

use crate::config::{NetworkConfig, Topology};
use crate::error::Result;
use crate::geometry::{sample_layout, uplink_factors, UserLayout};
use crate::mc::{qfunc, Estimate, RandomPlan, TrialRng};
use crate::outage::{CurveKind, OutageCurve};
use crate::wyner::{Calibration, MomentSource};

const LEFT: usize = 0;
const RIGHT: usize = 2;

pub(crate) fn sample_neighbourhood(cfg: &NetworkConfig, rng: &mut TrialRng) -> UserLayout {
    let local = NetworkConfig {
        n_cells: 3,
        topology: Topology::Linear,
        ..cfg.clone()
    };
    sample_layout(&local, rng)
}

/// Per-trial `U + V` of one uniformly chosen interferer in each neighbour cell.
pub fn tdma_interference_samples(cfg: &NetworkConfig, plan: &RandomPlan) -> Vec<f64> {
    let beta = cfg.pathloss_exp;
    let k = cfg.users_per_cell;
    plan.sample(|rng| {
        let layout = sample_neighbourhood(cfg, rng);
        let i = rng.random_range(0..k);
        let j = rng.random_range(0..k);
        uplink_factors(&layout, LEFT, i, beta).u + uplink_factors(&layout, RIGHT, j, beta).v
    })
}

/// Per-trial `sum_k (U_k + V_k)` over all users of both neighbour cells.
pub fn cdma_interference_samples(cfg: &NetworkConfig, plan: &RandomPlan) -> Vec<f64> {
    let beta = cfg.pathloss_exp;
    plan.sample(|rng| {
        let layout = sample_neighbourhood(cfg, rng);
        (0..cfg.users_per_cell)
            .map(|k| uplink_factors(&layout, LEFT, k, beta).u + uplink_factors(&layout, RIGHT, k, beta).v)
            .sum()
    })
}

/// Empirical `P[X > level(theta)]` at each threshold.
pub fn exceedance_curve(samples: &[f64], thresholds: &[f64], level: impl Fn(f64) -> f64) -> Result<OutageCurve> {
    let estimates = thresholds
        .iter()
        .map(|&t| {
            let lv = level(t);
            Estimate::from_count(samples.iter().filter(|&&x| x > lv).count(), samples.len())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OutageCurve::from_estimates(thresholds, &estimates))
}

pub fn tdma_outage_mc(cfg: &NetworkConfig, thresholds: &[f64], plan: &RandomPlan) -> Result<OutageCurve> {
    exceedance_curve(&tdma_interference_samples(cfg, plan), thresholds, |t| 1.0 / t)
}

/// `P[U <= 1/theta]` for a user uniform over its cell.
pub fn interferer_cdf(beta: f64, theta: f64) -> f64 {
    if theta <= 1.0 {
        return 1.0;
    }
    let t = theta.powf(-1.0 / beta);
    if theta <= 3f64.powf(beta) {
        t / (1.0 + t) + 0.5
    } else {
        t / (1.0 + t) + t / (1.0 - t)
    }
}

/// `q >= 1 - P[U <= 1/theta]^2`, from requiring neither interferer alone to
/// exceed `1/theta`.
pub fn tdma_outage_lower_bound(beta: f64, thresholds: &[f64]) -> OutageCurve {
    let values = thresholds
        .iter()
        .map(|&t| 1.0 - interferer_cdf(beta, t).powi(2))
        .collect();
    OutageCurve::analytic(CurveKind::LowerBound, thresholds, values)
}

/// `Q(x / sd)`, degenerating to a step when `sd == 0`.
pub(crate) fn gaussian_tail(x: f64, sd: f64) -> f64 {
    if sd > 0.0 {
        qfunc(x / sd)
    } else if x > 0.0 {
        0.0
    } else if x < 0.0 {
        1.0
    } else {
        0.5
    }
}

/// CLT approximation of the CDMA outage,
/// `Q((G/theta - (K-1) - sqrt(K) mu) / (sqrt(K) sigma_u))`.
pub fn cdma_outage_gaussian(
    cfg: &NetworkConfig,
    calibration: &Calibration,
    source: MomentSource,
    thresholds: &[f64],
) -> OutageCurve {
    let k = cfg.users_per_cell as f64;
    let m = calibration.pair_moments(source);
    let values = thresholds
        .iter()
        .map(|&t| gaussian_tail(cfg.spreading_gain / t - (k - 1.0) - k * m.mean, (k * m.var).sqrt()))
        .collect();
    OutageCurve::analytic(CurveKind::GaussianApprox, thresholds, values)
}

pub fn cdma_outage_mc(cfg: &NetworkConfig, thresholds: &[f64], plan: &RandomPlan) -> Result<OutageCurve> {
    let k = cfg.users_per_cell as f64;
    let g = cfg.spreading_gain;
    exceedance_curve(&cdma_interference_samples(cfg, plan), thresholds, |t| g / t - (k - 1.0))
}

/// Deterministic large-K CDMA SIR `G / (K - 1 + 2 alpha^2 K)`.
pub fn cdma_asymptotic_sir(gain: f64, k_users: usize, alpha_sq: f64) -> f64 {
    let k = k_users as f64;
    gain / (k - 1.0 + 2.0 * alpha_sq * k)
}

/// User count at which the asymptotic CDMA SIR equals `theta`.
pub fn cdma_transition_users(gain: f64, theta: f64, alpha_sq: f64) -> f64 {
    (gain / theta + 1.0) / (1.0 + 2.0 * alpha_sq)
}

/// Per-user TDMA rate for one interferer pair, bits per channel use.
pub fn tdma_rate(interference: f64, k_users: usize) -> f64 {
    (1.0 + 1.0 / interference).log2() / (2.0 * k_users as f64)
}

/// Per-user CDMA rate (optimal MUD, `G = K`) given `sum_k (U_k + V_k)`.
pub fn cdma_rate(interference_sum: f64, k_users: usize) -> f64 {
    tdma_rate(interference_sum / k_users as f64, k_users)
}

pub fn avg_throughput_tdma(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Estimate> {
    let k = cfg.users_per_cell;
    let rates: Vec<f64> = tdma_interference_samples(cfg, plan)
        .into_iter()
        .map(|x| tdma_rate(x, k))
        .collect();
    Estimate::from_samples(&rates)
}

pub fn avg_throughput_cdma(cfg: &NetworkConfig, plan: &RandomPlan) -> Result<Estimate> {
    let k = cfg.users_per_cell;
    let rates: Vec<f64> = cdma_interference_samples(cfg, plan)
        .into_iter()
        .map(|x| cdma_rate(x, k))
        .collect();
    Estimate::from_samples(&rates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::quad1d;
    use crate::wyner::{calibrate, wyner_avg_throughput};

    fn cfg(k: usize, beta: f64) -> NetworkConfig {
        NetworkConfig {
            users_per_cell: k,
            pathloss_exp: beta,
            exclusion_radius: 0.0,
            ..NetworkConfig::default()
        }
    }

    /// `P[U + V > x]` by brute-force 2-D quadrature over the two interferer
    /// positions.
    fn outage_by_quadrature(beta: f64, x: f64) -> f64 {
        let u = |l: f64| (l.abs() / (2.0 - l)).powf(beta);
        // for a fixed left interferer, {l2 : v(l2) > rem} is |l2| beyond a
        // cut-off on each side of the right cell's BS
        let inner = |l1: f64| {
            let rem = x - u(l1);
            if rem <= 0.0 {
                return 1.0;
            }
            let r = rem.powf(1.0 / beta);
            if r >= 1.0 {
                return 0.0;
            }
            let positive = (1.0 - 2.0 * r / (1.0 - r)).max(0.0);
            let negative = (1.0 - 2.0 * r / (1.0 + r)).max(0.0);
            0.5 * (positive + negative)
        };
        0.5 * quad1d(inner, -1.0, 0.0, 1e-10).unwrap() + 0.5 * quad1d(inner, 0.0, 1.0, 1e-10).unwrap()
    }

    #[test]
    fn no_outage_below_half() {
        let c = cfg(5, 4.0);
        let mc = tdma_outage_mc(&c, &[0.4, 0.5], &RandomPlan::new(1, 10_000)).unwrap();
        assert_eq!(mc.values, vec![0.0, 0.0]);
    }

    #[test]
    fn outage_tends_to_one() {
        let c = cfg(5, 4.0);
        let mc = tdma_outage_mc(&c, &[1e12], &RandomPlan::new(1, 10_000)).unwrap();
        assert!(mc.values[0] > 0.999);
    }

    #[test]
    fn lower_bound_branch_values() {
        assert_eq!(tdma_outage_lower_bound(4.0, &[0.5, 1.0]).values, vec![0.0, 0.0]);
        let b = tdma_outage_lower_bound(4.0, &[81.0]).values[0];
        assert!((b - 0.4375).abs() < 1e-12);
        // both branches agree at t = 1/3
        let t: f64 = 1.0 / 3.0;
        assert!((t / (1.0 + t) + t / (1.0 - t) - 0.75).abs() < 1e-15);
        assert!((interferer_cdf(4.0, 81.0 * (1.0 + 1e-12)) - 0.75).abs() < 1e-9);
    }

    #[test]
    fn tdma_mc_matches_quadrature_at_81() {
        let c = cfg(5, 4.0);
        let mc = tdma_outage_mc(&c, &[81.0], &RandomPlan::new(2, 200_000)).unwrap();
        let oracle = outage_by_quadrature(4.0, 1.0 / 81.0);
        assert!(mc.values[0] >= 0.4375);
        assert!((mc.values[0] - oracle).abs() < 3.0 * mc.std_errs[0], "{} vs {oracle}", mc.values[0]);
    }

    #[test]
    fn lower_bound_below_mc() {
        let thresholds: Vec<f64> = (0..30).map(|i| 10f64.powf(0.15 * i as f64)).collect();
        for beta in [2.0, 3.0, 4.0, 5.0] {
            let c = cfg(3, beta);
            let mc = tdma_outage_mc(&c, &thresholds, &RandomPlan::new(3, 50_000)).unwrap();
            let lb = tdma_outage_lower_bound(beta, &thresholds);
            for i in 0..thresholds.len() {
                assert!(lb.values[i] <= mc.values[i] + 3.0 * mc.std_errs[i] + 1e-12);
            }
        }
    }

    #[test]
    fn mc_curves_are_monotone() {
        let thresholds: Vec<f64> = (0..40).map(|i| 10f64.powf(0.1 * i as f64)).collect();
        let c = cfg(10, 4.0);
        let plan = RandomPlan::new(4, 20_000);
        for curve in [tdma_outage_mc(&c, &thresholds, &plan).unwrap(), cdma_outage_mc(&c, &thresholds, &plan).unwrap()] {
            assert!(curve.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(curve.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn gaussian_examples() {
        let cal = calibrate(4.0, 0.0).unwrap();
        let c = NetworkConfig { spreading_gain: 64.0, ..cfg(5, 4.0) };
        let cross: f64 = 64.0 / (4.0 + 0.125);
        assert!((cross - 15.52).abs() < 0.01);
        let q = cdma_outage_gaussian(&c, &cal, MomentSource::ClosedForm, &[cross]);
        assert!((q.values[0] - 0.5).abs() < 1e-12);
        let q = cdma_outage_gaussian(&c, &cal, MomentSource::ClosedForm, &[cross * 0.5, cross * 2.0]);
        assert!(q.values[0] < 0.5 && q.values[1] > 0.5);
    }

    #[test]
    fn gaussian_step_when_variance_vanishes() {
        let mut cal = calibrate(4.0, 0.0).unwrap();
        cal.sigma_u_sq = 0.0;
        let c = NetworkConfig { spreading_gain: 64.0, ..cfg(5, 4.0) };
        let cross: f64 = 64.0 / (4.0 + 0.125);
        let q = cdma_outage_gaussian(&c, &cal, MomentSource::ClosedForm, &[cross * 0.9, cross, cross * 1.1]);
        assert_eq!(q.values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn single_user_cdma_is_tdma() {
        let c = NetworkConfig { spreading_gain: 16.0, ..cfg(1, 4.0) };
        let plan = RandomPlan::new(5, 20_000);
        let thresholds = [2.0, 8.0, 40.0, 300.0];
        let cdma = cdma_outage_mc(&c, &thresholds, &plan).unwrap();
        let reparam: Vec<f64> = thresholds.iter().map(|t| t / 16.0).collect();
        let tdma = exceedance_curve(&cdma_interference_samples(&c, &plan), &reparam, |t| 1.0 / t).unwrap();
        assert_eq!(cdma.values, tdma.values);
    }

    #[test]
    fn cdma_support_bound() {
        let k = 6;
        let c = NetworkConfig { spreading_gain: 64.0, ..cfg(k, 4.0) };
        let theta = 64.0 / (k as f64 - 1.0 + 2.0 * k as f64) * 0.999;
        let q = cdma_outage_mc(&c, &[theta], &RandomPlan::new(6, 20_000)).unwrap();
        assert_eq!(q.values[0], 0.0);
    }

    #[test]
    fn transition_users_matches_mc() {
        let cal = calibrate(4.0, 0.0).unwrap();
        let theta = 4.0;
        let kstar = cdma_transition_users(64.0, theta, cal.exact_alpha_sq_ul);
        assert!(kstar >= 5.0);
        let plan = RandomPlan::new(7, 20_000);
        let q = |k: usize| {
            let c = NetworkConfig { spreading_gain: 64.0, ..cfg(k, 4.0) };
            cdma_outage_mc(&c, &[theta], &plan).unwrap().values[0]
        };
        let first = (1..60).find(|&k| q(k) >= 0.5).unwrap() as f64;
        assert!((first - kstar).abs() <= 1.0, "first {first} vs {kstar}");
    }

    #[test]
    fn fixed_interference_gives_wyner_value() {
        let a = calibrate(4.0, 0.0).unwrap().alpha_sq_ul;
        let k = 7;
        let w = wyner_avg_throughput(a, k);
        assert!((tdma_rate(2.0 * a, k) - w).abs() < 1e-15);
        assert!((cdma_rate(2.0 * a * k as f64, k) - w).abs() < 1e-15);
    }

    #[test]
    fn theorem_one_chain_small() {
        let cal = calibrate(4.0, 0.0).unwrap();
        for k in [2usize, 10] {
            let c = cfg(k, 4.0);
            let plan = RandomPlan::new(8, 40_000);
            let t = avg_throughput_tdma(&c, &plan).unwrap();
            let d = avg_throughput_cdma(&c, &plan).unwrap();
            let w = wyner_avg_throughput(cal.exact_alpha_sq_ul, k);
            assert!(t.mean - 3.0 * t.std_err > d.mean, "K={k}");
            assert!(d.mean > w, "K={k}");
        }
    }

    #[test]
    fn normalised_interference_variance_decays_like_one_over_k() {
        let plan = RandomPlan::new(9, 20_000);
        let var = |k: usize| {
            let s = cdma_interference_samples(&cfg(k, 4.0), &plan);
            let x: Vec<f64> = s.iter().map(|v| v / k as f64).collect();
            let m = x.iter().sum::<f64>() / x.len() as f64;
            x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
        };
        let ks = [4usize, 16, 64];
        let pts: Vec<(f64, f64)> = ks.iter().map(|&k| ((k as f64).ln(), var(k).ln())).collect();
        let slope = (pts[2].1 - pts[0].1) / (pts[2].0 - pts[0].0);
        assert!((slope + 1.0).abs() < 0.1, "slope {slope}");
    }
}
