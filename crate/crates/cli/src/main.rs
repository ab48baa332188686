use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

use cone_exit_cli::{run, CliError, RunConfig};

fn execute(config: &RunConfig) -> Result<(), CliError> {
    match &config.output {
        Some(path) => run(config, BufWriter::new(File::create(path)?)),
        None => run(config, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match execute(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
