//! Scenario runner for the `qdissip` library: reads a JSON config, evaluates
//! one of five modes over its sweep and writes a CSV or JSON table.

pub mod config;
pub mod error;
pub mod modes;
pub mod rng;
pub mod table;

use clap::Parser;
use std::io::Write;
use std::path::PathBuf;

pub use config::{parse, Mode, ScenarioConfig};
pub use error::CliError;
pub use modes::run;
pub use rng::SplitMix64;
pub use table::{Format, ResultTable};

#[derive(Debug, Parser)]
#[command(name = "qdissip", version, about = "Dissipative interferometry scenarios from a JSON config")]
pub struct Cli {
    /// Scenario config (JSON).
    pub config: PathBuf,
    /// Output file; stdout when absent. Overrides `out` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `format` in the config.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides `seed` in the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Loads the config, applies command-line overrides, runs and writes.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|source| CliError::ReadConfig { path: cli.config.clone(), source })?;
    let mut cfg = parse(&text)?;
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let table = run(&cfg)?;
    let rendered = table.emit(cfg.format, cfg.scenario.mode().name());
    match &cfg.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().lock().write_all(rendered.as_bytes())?,
    }
    Ok(())
}
