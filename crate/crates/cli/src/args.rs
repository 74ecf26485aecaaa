use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Uplink TDMA outage and its lower bound vs SIR threshold
    Fig3,
    /// Uplink CDMA outage vs users per cell at a fixed threshold
    Fig4,
    /// Uplink average throughput normalised by the Wyner value
    Fig5,
    /// Downlink TDMA outage (channel inversion) for centre and edge users
    Fig6,
    /// Downlink CDMA outage (channel inversion) for centre and edge users
    Fig7,
    /// Downlink average throughput vs users per cell
    Fig8,
    /// Downlink multicell per-cell sum throughput vs SNR
    Fig9,
    /// Check the throughput orderings and print PASS/FAIL per theorem
    VerifyTheorems,
    /// Print the Wyner calibration constants
    Calibrate,
    /// Outage and throughput summary of a single configuration
    Custom,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Fig5 => "fig5",
            Command::Fig6 => "fig6",
            Command::Fig7 => "fig7",
            Command::Fig8 => "fig8",
            Command::Fig9 => "fig9",
            Command::VerifyTheorems => "verify-theorems",
            Command::Calibrate => "calibrate",
            Command::Custom => "custom",
        }
    }
}

/// Wyner model accuracy experiments on a 1-D cellular array.
#[derive(Debug, Clone, Parser)]
#[command(name = "wyner-gauge", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Pathloss exponents, comma separated
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,

    /// Users per cell (K)
    #[arg(long)]
    pub users: Option<usize>,

    /// Number of cells (N)
    #[arg(long)]
    pub cells: Option<usize>,

    /// CDMA spreading gain (G)
    #[arg(long)]
    pub gain: Option<f64>,

    /// Transmit SNR in dB
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,

    /// SIR threshold in dB
    #[arg(long, allow_hyphen_values = true)]
    pub threshold_db: Option<f64>,

    /// Exclusion radius around each BS, in units of the cell half-width
    #[arg(long)]
    pub eps: Option<f64>,

    /// Co-channel users per neighbour cell for OFDMA (M)
    #[arg(long)]
    pub interferers: Option<usize>,

    /// Monte Carlo trials (layout draws for multicell runs)
    #[arg(long)]
    pub trials: Option<usize>,

    /// Master RNG seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write an SVG plot per CSV
    #[arg(long)]
    pub plot: bool,

    /// Worker threads (default: all cores)
    #[arg(long)]
    pub workers: Option<usize>,

    /// TOML file with [network] and [run] sections; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}
