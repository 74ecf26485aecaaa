//! Monte Carlo checks of the throughput orderings between TDMA, CDMA and the
//! Wyner model.

use wyner_gauge_core::downlink_mcp::lower_bound_draws;
use wyner_gauge_core::downlink_scp::{etp_avg_throughput, pci_avg_throughput, SIR_CAP};
use wyner_gauge_core::uplink_mcp::{mcp_draws, Scheme};
use wyner_gauge_core::uplink_scp::{avg_throughput_cdma, avg_throughput_tdma};
use wyner_gauge_core::wyner::{calibrate, wyner_avg_throughput};
use wyner_gauge_core::{Estimate, NetworkConfig, Result};

use crate::figures::{plan, Artifact, FigureOutput, FIG9_DEFAULT_EPS};
use crate::settings::Settings;
use crate::table::Table;

/// Required separation, in standard errors, for a Monte Carlo ordering.
pub const SIGMA: f64 = 3.0;
/// Per-draw slack for orderings that hold draw by draw.
pub const SLACK: f64 = 1e-9;

pub struct Verdict {
    pub lines: Vec<String>,
    pub passed: bool,
}

fn sep(hi: &Estimate, lo: &Estimate) -> f64 {
    (hi.mean - lo.mean) / (hi.std_err.powi(2) + lo.std_err.powi(2)).sqrt()
}

fn above(e: &Estimate, level: f64) -> f64 {
    (e.mean - level) / e.std_err
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Layout draws for the multicell checks, derived from the trial budget.
pub fn mcp_draw_count(trials: usize) -> usize {
    (trials / 1000).clamp(10, 200)
}

struct Recorder {
    table: Table,
    lines: Vec<String>,
    passed: bool,
}

impl Recorder {
    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.lines.push(format!("{} {line}", verdict(ok)));
    }
}

pub fn verify_theorems(s: &Settings) -> Result<(FigureOutput, Verdict)> {
    let cfg = &s.network;
    let beta = cfg.pathloss_exp;
    let k = cfg.users_per_cell;
    let cal = calibrate(beta, cfg.eps())?;
    let equal_gain = NetworkConfig { spreading_gain: k as f64, ..cfg.clone() };
    let mut r = Recorder { table: Table::default(), lines: Vec::new(), passed: true };

    // uplink, single-cell processing
    let tdma = avg_throughput_tdma(cfg, &plan(s, 11))?;
    let cdma = avg_throughput_cdma(cfg, &plan(s, 12))?;
    let w_ul = wyner_avg_throughput(cal.exact_alpha_sq_ul, k);
    r.table.push_estimate(1.0, &tdma, "ul_tdma");
    r.table.push_estimate(1.0, &cdma, "ul_cdma");
    r.table.push_exact(1.0, w_ul, "analytic", "ul_wyner");
    let (m1, m2) = (sep(&tdma, &cdma), above(&cdma, w_ul));
    r.check(
        m1 >= SIGMA && m2 >= SIGMA,
        format!(
            "uplink SCP: TDMA {:.6} >= CDMA {:.6} >= Wyner {w_ul:.6}; margins {m1:.1} and {m2:.1} sigma",
            tdma.mean, cdma.mean
        ),
    );

    // uplink, multicell processing
    let draws = mcp_draw_count(plan(s, 0).trials);
    let mcp_plan = plan(s, 13).with_trials(draws);
    let ul = mcp_draws(cfg, &mcp_plan)?;
    let worst = ul.iter().map(|d| d.cdma - d.tdma).fold(f64::INFINITY, f64::min);
    let ul_t = Estimate::from_samples(&ul.iter().map(|d| d.tdma).collect::<Vec<_>>())?;
    let ul_c = Estimate::from_samples(&ul.iter().map(|d| d.cdma).collect::<Vec<_>>())?;
    r.table.push_estimate(2.0, &ul_t, "ul_mcp_tdma");
    r.table.push_estimate(2.0, &ul_c, "ul_mcp_cdma");
    r.table.push_exact(2.0, worst, "min_over_draws", "ul_mcp_cdma_minus_tdma");
    r.check(
        worst >= -SLACK,
        format!(
            "uplink MCP: CDMA {:.6} >= TDMA {:.6}; smallest per-draw gap {worst:.3e} over {draws} draws",
            ul_c.mean, ul_t.mean
        ),
    );

    // downlink, perfect channel inversion
    let pt = pci_avg_throughput(&equal_gain, &plan(s, 14), Scheme::Tdma)?;
    let pc = pci_avg_throughput(&equal_gain, &plan(s, 15), Scheme::Cdma)?;
    let w_dl = wyner_avg_throughput(cal.alpha_sq_dl, k);
    r.table.push_estimate(3.0, &pt, "pci_tdma");
    r.table.push_estimate(3.0, &pc, "pci_cdma");
    r.table.push_exact(3.0, w_dl, "analytic", "dl_wyner");
    let (m1, m2) = (sep(&pt, &pc), above(&pc, w_dl));
    r.check(
        m1 >= SIGMA && m2 >= SIGMA,
        format!(
            "downlink inversion: TDMA {:.6} >= CDMA {:.6} >= Wyner {w_dl:.6}; margins {m1:.1} and {m2:.1} sigma",
            pt.mean, pc.mean
        ),
    );

    // downlink, equal transmit power
    let etp = etp_avg_throughput(cfg, &plan(s, 16), SIR_CAP)?;
    r.table.push_estimate(4.0, &etp, "etp");
    r.table.push_exact(4.0, w_ul, "analytic", "ul_wyner");
    let m = above(&etp, w_ul);
    r.check(
        m >= SIGMA,
        format!("downlink equal power: ETP {:.6} >= Wyner {w_ul:.6}; margin {m:.1} sigma", etp.mean),
    );

    // downlink, multicell processing lower bounds
    let dl_cfg = if cfg.eps() > 0.0 {
        cfg.clone()
    } else {
        NetworkConfig { exclusion_radius: FIG9_DEFAULT_EPS * cfg.cell_half_width, ..cfg.clone() }
    };
    let dl = lower_bound_draws(&dl_cfg, &plan(s, 17).with_trials(draws))?;
    let worst = dl.iter().map(|d| d.cdma - d.tdma).fold(f64::INFINITY, f64::min);
    let dl_t = Estimate::from_samples(&dl.iter().map(|d| d.tdma).collect::<Vec<_>>())?;
    let dl_c = Estimate::from_samples(&dl.iter().map(|d| d.cdma).collect::<Vec<_>>())?;
    r.table.push_estimate(6.0, &dl_t, "dl_mcp_tdma");
    r.table.push_estimate(6.0, &dl_c, "dl_mcp_cdma");
    r.table.push_exact(6.0, worst, "min_over_draws", "dl_mcp_cdma_minus_tdma");
    r.check(
        worst >= -SLACK,
        format!(
            "downlink MCP bound: CDMA {:.6} >= TDMA {:.6}; smallest per-draw gap {worst:.3e} over {draws} draws",
            dl_c.mean, dl_t.mean
        ),
    );

    let mut out = FigureOutput::default();
    out.artifacts.push(Artifact {
        stem: "theorems".into(),
        title: format!("Throughput orderings, beta = {beta}, K = {k}"),
        table: r.table,
    });
    out.report.extend(r.lines.iter().cloned());
    Ok((out, Verdict { lines: r.lines, passed: r.passed }))
}
