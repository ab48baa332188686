//! Command-line front end of the `cone-exit` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

use commands::Report;
pub use config::RunConfig;
pub use error::CliError;

use config::{Command, Format};

/// Runs one subcommand and writes its output to `out`.
pub fn run<W: Write>(config: &RunConfig, mut out: W) -> Result<(), CliError> {
    let report = match &config.command {
        Command::Spectrum(a) => Report::Table(commands::spectrum_table(a)?),
        Command::Density(a) => Report::Table(commands::density_table(a)?),
        Command::Tail(a) => Report::Table(commands::tail_table(a)?),
        Command::Survival(a) => Report::Table(commands::survival_table(a)?),
        Command::Asymptote(a) => Report::Table(commands::asymptote_table(a)?),
        Command::Simulate(a) => commands::simulate_report(a, config)?,
        Command::Compare(a) => Report::Table(commands::compare_table(a)?),
    };
    match report {
        Report::Raw(bytes) => out.write_all(&bytes)?,
        Report::Table(t) => match config.format {
            Format::Csv => t.write_csv(&mut out)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &t.to_json(config)?)?;
                writeln!(out)?;
            }
        },
    }
    out.flush()?;
    Ok(())
}
