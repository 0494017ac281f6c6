//! Experiment runner for `coarsemap-core`: group and map loading, flat JSON
//! configs, CSV/JSON reports and the acceptance battery.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use std::io::Write;

use anyhow::{Context, Result};
use clap::Parser;

use crate::commands::Command;
use crate::config::{Format, Settings};

#[derive(Debug, Parser)]
#[command(name = "coarsemap", version, about = "Desk-scale experiments on maps between groups")]
pub struct Cli {
    /// Flat JSON file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Exit status: 0 when every asserted property held, 1 on a violation,
/// 2 on configuration or parse errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Runs the command and writes its report; returns whether it passed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let flags = cli.command.settings();
    flags.check_applicable(cli.command.name(), cli.command.allowed())?;
    let settings = match &cli.config {
        Some(path) => flags.clone().over(Settings::load(path)?),
        None => flags.clone(),
    };
    let report = commands::run(&cli.command, &settings)?;
    let default = if cli.command.is_profile() { Format::Csv } else { Format::Json };
    let format = settings.format.unwrap_or(default);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match &settings.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            report.write(format, &mut f)?;
            f.flush()?;
        }
        None => report.write(format, &mut lock)?,
    }
    // Violation details always reach standard output, even when the report
    // went to a file or is plain CSV.
    if !report.ok && (settings.out.is_some() || format == Format::Csv) {
        writeln!(lock, "violation: {}", serde_json::to_string(&report.witnesses)?)?;
    }
    Ok(report.ok)
}
