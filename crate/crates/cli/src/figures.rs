//! Figure reproductions. Each returns the CSV tables it produced plus
//! human-readable summary lines.

use wyner_gauge_core::config::linear_to_db;
use wyner_gauge_core::downlink_mcp::{limit_matrix, lower_bound_draws};
use wyner_gauge_core::downlink_scp::{
    etp_avg_throughput, pci_avg_throughput, pci_cdma_outage_gaussian, pci_cdma_outage_mc, pci_outage_asymptotic,
    pci_tdma_outage_bound, pci_tdma_outage_mc, UserPosition, SIR_CAP,
};
use wyner_gauge_core::ofdma::{ofdma_outage_gaussian, ofdma_outage_mc, OfdmaScenario};
use wyner_gauge_core::uplink_mcp::Scheme;
use wyner_gauge_core::uplink_scp::{
    avg_throughput_cdma, avg_throughput_tdma, cdma_asymptotic_sir, cdma_outage_gaussian, cdma_outage_mc,
    cdma_transition_users, tdma_outage_lower_bound, tdma_outage_mc,
};
use wyner_gauge_core::wyner::{calibrate, wyner_avg_throughput, wyner_mcp_throughput, MomentSource};
use wyner_gauge_core::{Estimate, NetworkConfig, RandomPlan, Result, ThresholdGrid};

use crate::settings::Settings;
use crate::table::Table;

pub struct Artifact {
    pub stem: String,
    pub title: String,
    pub table: Table,
}

#[derive(Default)]
pub struct FigureOutput {
    pub artifacts: Vec<Artifact>,
    pub report: Vec<String>,
}

impl FigureOutput {
    fn add(&mut self, stem: impl Into<String>, title: impl Into<String>, table: Table) {
        self.artifacts.push(Artifact { stem: stem.into(), title: title.into(), table });
    }
}

pub const FIG9_DEFAULT_EPS: f64 = 0.05;
const FIG9_SENSITIVITY_EPS: [f64; 3] = [0.01, 0.05, 0.1];

pub fn default_trials(command: crate::args::Command) -> usize {
    use crate::args::Command::*;
    match command {
        Fig9 => 20,
        Calibrate => 0,
        _ => 100_000,
    }
}

pub fn plan(s: &Settings, tag: u64) -> RandomPlan {
    let trials = s.trials.unwrap_or_else(|| default_trials(s.command));
    RandomPlan::new(s.network.seed, trials).derive(tag)
}

fn beta_tag(beta: f64) -> u64 {
    beta.to_bits()
}

fn beta_label(beta: f64) -> String {
    format!("beta{beta}")
}

fn db(x: f64) -> f64 {
    linear_to_db(x)
}

pub fn fig3(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let grid = ThresholdGrid::log_spaced(1.0, 1e4, ThresholdGrid::DEFAULT_POINTS);
    for &beta in &s.betas {
        let cfg = s.network.with_beta(beta);
        let mc = tdma_outage_mc(&cfg, grid.as_slice(), &plan(s, beta_tag(beta)))?;
        let lb = tdma_outage_lower_bound(beta, grid.as_slice());
        let mut t = Table::default();
        t.push_curve(&mc, "tdma", db);
        t.push_curve(&lb, "tdma", db);
        let worst = (0..grid.as_slice().len())
            .map(|i| lb.values[i] - mc.values[i])
            .fold(f64::NEG_INFINITY, f64::max);
        out.report.push(format!("beta={beta}: max(lower_bound - mc) = {worst:.4}"));
        out.add(format!("fig3_{}", beta_label(beta)), format!("Uplink TDMA outage, beta = {beta}"), t);
    }
    Ok(out)
}

pub fn fig4(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let theta = s.network.sir_threshold;
    let g = s.network.spreading_gain;
    for &beta in &s.betas {
        let cal = calibrate(beta, s.network.eps())?;
        let k_star = cdma_transition_users(g, theta, cal.exact_alpha_sq_ul);
        let k_closed = cdma_transition_users(g, theta, cal.alpha_sq_ul);
        let k_max = ((2.0 * k_star.max(k_closed)).ceil() as usize).clamp(10, 400);
        let base = s.network.with_beta(beta);
        let mut t = Table::default();
        let mut mc_cross = None;
        for k in 1..=k_max {
            let cfg = base.with_users(k);
            let mc = cdma_outage_mc(&cfg, &[theta], &plan(s, beta_tag(beta) ^ k as u64))?;
            let x = k as f64;
            t.push(x, mc.values[0], mc.ci95(0), "mc", "cdma");
            if mc_cross.is_none() && mc.values[0] >= 0.5 {
                mc_cross = Some(k);
            }
            for (source, series) in [(MomentSource::Exact, "cdma"), (MomentSource::ClosedForm, "cdma_closed_form")] {
                let q = cdma_outage_gaussian(&cfg, &cal, source, &[theta]);
                t.push_exact(x, q.values[0], "gaussian_approx", series);
            }
            let step = if cdma_asymptotic_sir(g, k, cal.exact_alpha_sq_ul) < theta { 1.0 } else { 0.0 };
            t.push_exact(x, step, "asymptotic", "cdma");
        }
        out.report.push(format!(
            "beta={beta}, theta={:.2} dB: K* = {k_star:.2} (closed-form alpha: {k_closed:.2}); first K with mc outage >= 0.5: {}",
            db(theta),
            mc_cross.map_or("none".to_string(), |k| k.to_string())
        ));
        out.add(
            format!("fig4_{}", beta_label(beta)),
            format!("Uplink CDMA outage vs K, beta = {beta}, theta = {:.1} dB", db(theta)),
            t,
        );
    }
    Ok(out)
}

const FIG5_USERS: [usize; 10] = [1, 2, 3, 5, 10, 20, 30, 50, 70, 100];

pub fn fig5(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    for &beta in &s.betas {
        let cal = calibrate(beta, s.network.eps())?;
        let base = s.network.with_beta(beta);
        let mut t = Table::default();
        for &k in &FIG5_USERS {
            let cfg = base.with_users(k);
            let w = wyner_avg_throughput(cal.exact_alpha_sq_ul, k);
            let tag = beta_tag(beta) ^ k as u64;
            let tdma = avg_throughput_tdma(&cfg, &plan(s, tag))?.scaled(1.0 / w);
            let cdma = avg_throughput_cdma(&cfg, &plan(s, tag ^ 0xcd))?.scaled(1.0 / w);
            let x = k as f64;
            t.push_estimate(x, &tdma, "tdma");
            t.push_estimate(x, &cdma, "cdma");
            t.push_exact(x, 1.0, "analytic", "wyner");
            t.push_exact(x, wyner_avg_throughput(cal.alpha_sq_ul, k) / w, "analytic", "wyner_closed_form");
            if k == FIG5_USERS[FIG5_USERS.len() - 1] {
                out.report.push(format!(
                    "beta={beta}, K={k}: tdma/wyner = {:.3}, cdma/wyner = {:.3}",
                    tdma.mean, cdma.mean
                ));
            }
        }
        out.add(
            format!("fig5_{}", beta_label(beta)),
            format!("Uplink throughput / Wyner, beta = {beta}"),
            t,
        );
    }
    Ok(out)
}

const POSITIONS: [(&str, f64); 2] = [("center", 0.0), ("edge", 1.0)];

pub fn fig6(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let beta = s.betas[0];
    let cfg = s.network.with_beta(beta);
    let grid = ThresholdGrid::log_spaced(1.0, 1e4, ThresholdGrid::DEFAULT_POINTS);
    let mut t = Table::default();
    for (i, (name, offset)) in POSITIONS.into_iter().enumerate() {
        let pos = UserPosition { offset };
        let mc = pci_tdma_outage_mc(&cfg, pos, grid.as_slice(), &plan(s, i as u64))?;
        t.push_curve(&mc, name, db);
        t.push_curve(&pci_tdma_outage_bound(beta, pos, grid.as_slice()), name, db);
    }
    out.report.push(format!("beta={beta}: downlink TDMA outage for centre and edge users"));
    out.add("fig6", format!("Downlink TDMA outage, beta = {beta}"), t);
    Ok(out)
}

pub fn fig7(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let beta = s.betas[0];
    let cfg = s.network.with_beta(beta);
    let cal = calibrate(beta, cfg.eps())?;
    let grid = ThresholdGrid::log_spaced(10f64.powf(-0.5), 10f64.powf(2.5), ThresholdGrid::DEFAULT_POINTS);
    let mut t = Table::default();
    for (i, (name, offset)) in POSITIONS.into_iter().enumerate() {
        let pos = UserPosition { offset };
        let mc = pci_cdma_outage_mc(&cfg, pos, grid.as_slice(), &plan(s, i as u64))?;
        let gauss = pci_cdma_outage_gaussian(&cfg, pos, grid.as_slice());
        let asym = pci_outage_asymptotic(&cfg, &cal, pos, grid.as_slice());
        out.report.push(format!(
            "{name}: mc 0.5-crossing at {}, gaussian error {:.4}",
            mc.crossing(0.5).map_or("none".into(), |x| format!("{x:.3}")),
            gauss.max_abs_diff(&mc)
        ));
        t.push_curve(&mc, name, db);
        t.push_curve(&gauss, name, db);
        t.push_curve(&asym, name, db);
    }
    out.add("fig7", format!("Downlink CDMA outage, beta = {beta}, K = {}", cfg.users_per_cell), t);
    Ok(out)
}

const FIG8_USERS: [usize; 7] = [1, 2, 5, 10, 20, 50, 100];

pub fn fig8(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    for &beta in &s.betas {
        let cal = calibrate(beta, s.network.eps())?;
        let base = s.network.with_beta(beta);
        let mut t = Table::default();
        for &k in &FIG8_USERS {
            let cfg = NetworkConfig { spreading_gain: k as f64, ..base.with_users(k) };
            let tag = beta_tag(beta) ^ k as u64;
            let x = k as f64;
            t.push_estimate(x, &pci_avg_throughput(&cfg, &plan(s, tag), Scheme::Tdma)?, "pci_tdma");
            t.push_estimate(x, &pci_avg_throughput(&cfg, &plan(s, tag ^ 0xcd), Scheme::Cdma)?, "pci_cdma");
            t.push_estimate(x, &etp_avg_throughput(&cfg, &plan(s, tag ^ 0xe7), SIR_CAP)?, "etp");
            t.push_exact(x, wyner_avg_throughput(cal.alpha_sq_dl, k), "analytic", "wyner_dl");
            t.push_exact(x, wyner_avg_throughput(cal.exact_alpha_sq_ul, k), "analytic", "wyner_ul");
        }
        out.report.push(format!("beta={beta}: downlink average throughput over K = {FIG8_USERS:?}"));
        out.add(format!("fig8_{}", beta_label(beta)), format!("Downlink throughput, beta = {beta}"), t);
    }
    Ok(out)
}

pub fn fig9_eps(s: &Settings) -> f64 {
    if s.eps_given {
        s.network.eps()
    } else {
        FIG9_DEFAULT_EPS
    }
}

pub fn fig9(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let beta = s.betas[0];
    let eps = fig9_eps(s);
    let base = NetworkConfig {
        exclusion_radius: eps * s.network.cell_half_width,
        ..s.network.with_beta(beta)
    };
    let alpha = calibrate(beta, 0.0)?.alpha_sq_ul.sqrt();
    let lm = limit_matrix(&base)?;
    let n = base.n_cells;
    let mut t = Table::default();
    for i in 0..=10 {
        let snr_db = 2.0 * i as f64;
        let snr = wyner_gauge_core::config::db_to_linear(snr_db);
        let cfg = NetworkConfig { snr, ..base.clone() };
        let m = lm.throughput(snr)?;
        t.push_exact(snr_db, m, "asymptotic", "limit_cdma");
        let draws = lower_bound_draws(&cfg, &plan(s, i as u64))?;
        let cdma: Vec<f64> = draws.iter().map(|d| d.cdma).collect();
        let tdma: Vec<f64> = draws.iter().map(|d| d.tdma).collect();
        let cdma = Estimate::from_samples(&cdma)?;
        t.push_estimate(snr_db, &cdma, "lower_cdma");
        t.push_estimate(snr_db, &Estimate::from_samples(&tdma)?, "lower_tdma");
        let w = wyner_mcp_throughput(n, alpha, snr)?;
        t.push_exact(snr_db, w, "analytic", "wyner");
        t.push_exact(snr_db, (1.0 + snr).log2(), "analytic", "no_interference");
        out.report.push(format!(
            "S={snr_db:>4.1} dB: limit {m:.4}, finite-K cdma {:.4}, wyner {w:.4} ({:+.1}%)",
            cdma.mean,
            100.0 * (m - w) / w
        ));
    }
    out.add(
        "fig9",
        format!("Per-cell sum throughput, beta = {beta}, eps = {eps}, N = {n}, K = {}", base.users_per_cell),
        t,
    );

    // the limit depends on the exclusion radius through E[a^2]
    let mut sens = Table::default();
    for e in FIG9_SENSITIVITY_EPS {
        let lm = limit_matrix(&NetworkConfig { exclusion_radius: e * s.network.cell_half_width, ..base.clone() })?;
        let mut worst = 0.0f64;
        for i in 0..=10 {
            let snr_db = 2.0 * i as f64;
            let snr = wyner_gauge_core::config::db_to_linear(snr_db);
            let m = lm.throughput(snr)?;
            let w = wyner_mcp_throughput(n, alpha, snr)?;
            worst = worst.max((m - w).abs() / w);
            sens.push_exact(snr_db, m, "asymptotic", &format!("limit_eps{e}"));
        }
        out.report.push(format!("eps={e}: limit vs wyner max relative deviation {:.2}%", 100.0 * worst));
    }
    out.add("fig9_eps_sensitivity", format!("Many-user limit vs exclusion radius, beta = {beta}"), sens);
    Ok(out)
}

pub fn calibrate_cmd(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let mut t = Table::default();
    let eps = s.network.eps();
    for &beta in &s.betas {
        let c = calibrate(beta, eps)?;
        t.push_exact(beta, c.alpha_sq_ul, "analytic", "alpha_sq_ul");
        t.push_exact(beta, c.alpha_sq_dl, "analytic", "alpha_sq_dl");
        t.push_exact(beta, c.gamma, "analytic", "gamma");
        t.push_exact(beta, c.sigma_u_sq, "analytic", "sigma_u_sq");
        t.push_exact(beta, c.exact_alpha_sq_ul, "quadrature", "exact_mean_u");
        t.push_exact(beta, c.exact_sigma_u_sq, "quadrature", "exact_sigma_u_sq");
        out.report.push(format!(
            "beta={beta} eps={eps}: alpha_sq_ul = {:.6}  alpha_sq_dl = {:.6}  gamma = {:.6}  sigma_u_sq = {:.6e}  exact E[U] = {:.6}  exact sigma_u_sq = {:.6}",
            c.alpha_sq_ul, c.alpha_sq_dl, c.gamma, c.sigma_u_sq, c.exact_alpha_sq_ul, c.exact_sigma_u_sq
        ));
    }
    out.add("calibrate", "Wyner calibration", t);
    Ok(out)
}

pub fn custom(s: &Settings) -> Result<FigureOutput> {
    let mut out = FigureOutput::default();
    let cfg = &s.network;
    let beta = cfg.pathloss_exp;
    let cal = calibrate(beta, cfg.eps())?;
    let grid = ThresholdGrid::log_spaced(0.1, 1e4, ThresholdGrid::DEFAULT_POINTS);
    let th = grid.as_slice();
    let mut t = Table::default();
    t.push_curve(&tdma_outage_mc(cfg, th, &plan(s, 1))?, "uplink_tdma", db);
    t.push_curve(&tdma_outage_lower_bound(beta, th), "uplink_tdma", db);
    t.push_curve(&cdma_outage_mc(cfg, th, &plan(s, 2))?, "uplink_cdma", db);
    t.push_curve(&cdma_outage_gaussian(cfg, &cal, MomentSource::Exact, th), "uplink_cdma", db);
    let sc = OfdmaScenario::from_config(cfg)?;
    t.push_curve(&ofdma_outage_mc(&sc, th, &plan(s, 3))?, "ofdma", db);
    t.push_curve(&ofdma_outage_gaussian(&sc, &cal, MomentSource::Exact, th), "ofdma", db);
    out.add("custom_outage", format!("Uplink outage, beta = {beta}, K = {}", cfg.users_per_cell), t);

    let k = cfg.users_per_cell;
    let x = k as f64;
    let equal_gain = NetworkConfig { spreading_gain: x, ..cfg.clone() };
    let mut r = Table::default();
    let entries = [
        ("uplink_tdma", avg_throughput_tdma(cfg, &plan(s, 4))?),
        ("uplink_cdma", avg_throughput_cdma(cfg, &plan(s, 5))?),
        ("pci_tdma", pci_avg_throughput(&equal_gain, &plan(s, 6), Scheme::Tdma)?),
        ("pci_cdma", pci_avg_throughput(&equal_gain, &plan(s, 7), Scheme::Cdma)?),
        ("etp", etp_avg_throughput(cfg, &plan(s, 8), SIR_CAP)?),
    ];
    for (name, e) in &entries {
        r.push_estimate(x, e, name);
        out.report.push(format!("{name}: {:.6} +/- {:.6}", e.mean, e.std_err));
    }
    r.push_exact(x, wyner_avg_throughput(cal.exact_alpha_sq_ul, k), "analytic", "wyner_ul");
    r.push_exact(x, wyner_avg_throughput(cal.alpha_sq_dl, k), "analytic", "wyner_dl");
    out.add("custom_throughput", format!("Average throughput, K = {k}"), r);
    Ok(out)
}
