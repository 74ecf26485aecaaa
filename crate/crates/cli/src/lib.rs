//! Command-line front end: resolves settings, runs one experiment, and writes
//! CSV tables, optional SVG plots, a text report and a `run.json` manifest.

pub mod args;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod plot;
pub mod settings;
pub mod table;
pub mod verify;

use std::path::PathBuf;
use std::time::Instant;

pub use args::{Cli, Command};
pub use error::CliError;

use figures::FigureOutput;
use settings::Settings;

/// What a successful run produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: Vec<String>,
    /// `false` only when `verify-theorems` found a violated ordering.
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn execute(s: &Settings) -> Result<(FigureOutput, bool), CliError> {
    let out = match s.command {
        Command::Fig3 => figures::fig3(s)?,
        Command::Fig4 => figures::fig4(s)?,
        Command::Fig5 => figures::fig5(s)?,
        Command::Fig6 => figures::fig6(s)?,
        Command::Fig7 => figures::fig7(s)?,
        Command::Fig8 => figures::fig8(s)?,
        Command::Fig9 => figures::fig9(s)?,
        Command::Calibrate => figures::calibrate_cmd(s)?,
        Command::Custom => figures::custom(s)?,
        Command::VerifyTheorems => {
            let (out, v) = verify::verify_theorems(s)?;
            return Ok((out, v.passed));
        }
    };
    Ok((out, true))
}

/// Resolves settings and runs the command, printing the report to stdout.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = settings::resolve(cli)?;
    let outcome = run_settings(&s)?;
    for line in &outcome.report {
        println!("{line}");
    }
    Ok(outcome)
}

pub fn run_settings(s: &Settings) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (out, passed) = match s.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {w} workers: {e}")))?
            .install(|| execute(s))?,
        None => execute(s)?,
    };
    std::fs::create_dir_all(&s.out)?;
    let mut files = Vec::new();
    for a in &out.artifacts {
        let csv = s.out.join(format!("{}.csv", a.stem));
        a.table.write(&csv)?;
        files.push(csv.clone());
        if s.plot {
            let svg = s.out.join(format!("{}.svg", a.stem));
            plot::render(&csv, &svg, &a.title)?;
            files.push(svg);
        }
    }
    let report = s.out.join("report.txt");
    let mut text = out.report.join("\n");
    text.push('\n');
    std::fs::write(&report, text)?;
    files.push(report);
    let manifest = manifest::Manifest::new(s, &files, start.elapsed().as_secs_f64())?;
    let path = s.out.join("run.json");
    manifest.write(&path)?;
    files.push(path);
    Ok(Outcome { files, report: out.report, passed })
}
