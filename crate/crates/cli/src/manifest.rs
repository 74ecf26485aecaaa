use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::figures::{default_trials, fig9_eps};
use crate::settings::Settings;
use crate::args::Command;
use wyner_gauge_core::downlink_scp::SIR_CAP;

#[derive(Debug, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun an invocation and check its outputs.
#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub settings: &'a Settings,
    pub seed: u64,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_exclusion_radius: Option<f64>,
    /// SIR ceiling applied inside every rate `log2(1 + SIR)`.
    pub sir_cap: f64,
    pub config_file: Option<PathBuf>,
    pub outputs: Vec<OutputFile>,
    pub wall_clock_secs: f64,
}

fn sha256_hex(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

impl<'a> Manifest<'a> {
    pub fn new(s: &'a Settings, files: &[PathBuf], wall_clock_secs: f64) -> std::io::Result<Self> {
        let outputs = files
            .iter()
            .map(|p| {
                Ok(OutputFile {
                    path: p.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
                    sha256: sha256_hex(p)?,
                })
            })
            .collect::<std::io::Result<_>>()?;
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: s.command.name(),
            settings: s,
            seed: s.network.seed,
            trials: s.trials.unwrap_or_else(|| default_trials(s.command)),
            effective_exclusion_radius: (s.command == Command::Fig9).then(|| fig9_eps(s) * s.network.cell_half_width),
            sir_cap: SIR_CAP,
            config_file: s.config_path.clone(),
            outputs,
            wall_clock_secs,
        })
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}
