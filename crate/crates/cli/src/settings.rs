//! Resolution of the effective run settings from defaults, an optional TOML
//! file and command-line flags, in increasing precedence.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wyner_gauge_core::config::{db_to_linear, linear_to_db};
use wyner_gauge_core::{NetworkConfig, Topology};

use crate::args::{Cli, Command};
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    network: NetworkFile,
    run: RunFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct NetworkFile {
    n_cells: Option<usize>,
    users_per_cell: Option<usize>,
    cell_half_width: Option<f64>,
    pathloss_exp: Option<f64>,
    spreading_gain: Option<f64>,
    snr_db: Option<f64>,
    sir_threshold_db: Option<f64>,
    exclusion_radius: Option<f64>,
    ofdma_interferers: Option<usize>,
    ref_dist: Option<f64>,
    topology: Option<Topology>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunFile {
    betas: Option<Vec<f64>>,
    trials: Option<usize>,
    out: Option<PathBuf>,
    plot: Option<bool>,
    workers: Option<usize>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub command: Command,
    pub network: NetworkConfig,
    pub snr_db: f64,
    pub sir_threshold_db: f64,
    pub betas: Vec<f64>,
    /// `None` selects the per-command default.
    pub trials: Option<usize>,
    pub out: PathBuf,
    pub plot: bool,
    pub workers: Option<usize>,
    /// Whether the exclusion radius / threshold came from the user rather than
    /// the built-in default; some commands pick their own otherwise.
    #[serde(skip)]
    pub eps_given: bool,
    #[serde(skip)]
    pub threshold_given: bool,
    #[serde(skip)]
    pub config_path: Option<PathBuf>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        let msg = e.message().to_string();
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(&text, span.start);
                CliError::Usage(format!("{}:{line}:{col}: {msg}", path.display()))
            }
            None => CliError::Usage(format!("{}: {msg}", path.display())),
        }
    })
}

pub fn resolve(cli: &Cli) -> Result<Settings, CliError> {
    let file = match &cli.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    let (nf, rf) = (file.network, file.run);
    let d = NetworkConfig::default();

    let betas = cli.beta.clone().or(rf.betas).or(nf.pathloss_exp.map(|b| vec![b]));
    let betas = betas.unwrap_or_else(|| vec![d.pathloss_exp]);
    if betas.is_empty() {
        return Err(CliError::Usage("at least one pathloss exponent is required".into()));
    }
    let snr_db = cli.snr_db.or(nf.snr_db).unwrap_or_else(|| linear_to_db(d.snr));
    let threshold_db = cli.threshold_db.or(nf.sir_threshold_db);
    let half_width = nf.cell_half_width.unwrap_or(d.cell_half_width);
    // the flag is relative to R, the file key is a length
    let eps = cli.eps.map(|e| e * half_width).or(nf.exclusion_radius);
    let users = cli.users.or(nf.users_per_cell).unwrap_or(d.users_per_cell);

    let network = NetworkConfig {
        n_cells: cli.cells.or(nf.n_cells).unwrap_or(d.n_cells),
        users_per_cell: users,
        cell_half_width: half_width,
        pathloss_exp: betas[0],
        spreading_gain: cli.gain.or(nf.spreading_gain).unwrap_or(d.spreading_gain),
        snr: db_to_linear(snr_db),
        sir_threshold: threshold_db.map_or(d.sir_threshold, db_to_linear),
        exclusion_radius: eps.unwrap_or(d.exclusion_radius),
        ofdma_interferers: cli.interferers.or(nf.ofdma_interferers).unwrap_or(d.ofdma_interferers.min(users)),
        ref_dist: nf.ref_dist.unwrap_or(d.ref_dist),
        topology: nf.topology.unwrap_or(d.topology),
        seed: cli.seed.or(nf.seed).unwrap_or(d.seed),
    };
    for &b in &betas {
        network.with_beta(b).validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let trials = cli.trials.or(rf.trials);
    if trials == Some(0) {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let workers = cli.workers.or(rf.workers);
    if workers == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    Ok(Settings {
        command: cli.command,
        sir_threshold_db: linear_to_db(network.sir_threshold),
        snr_db,
        network,
        betas,
        trials,
        out: cli.out.clone().or(rf.out).unwrap_or_else(|| PathBuf::from("out")),
        plot: cli.plot || rf.plot.unwrap_or(false),
        workers,
        eps_given: eps.is_some(),
        threshold_given: threshold_db.is_some(),
        config_path: cli.config.clone(),
    })
}
