//! Command-line surface of `su2lab`: argument parsing, dispatch and the
//! CSV / JSON result formats.

pub mod args;
pub mod commands;
pub mod error;
pub mod record;
pub mod results;

pub use args::{Cli, Command, Format};
pub use error::CliError;
pub use record::ExperimentRecord;
pub use results::{parse_results_file, ParsedResults};

use record::RunInfo;
use std::io::Write;
use std::time::Instant;

/// Runs one parsed command line and writes its data. Returns whether every
/// check the command performed passed.
pub fn execute(cli: Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let mut outcome = commands::run(cli.command)?;
    if outcome.output.provenance {
        outcome.record.run = Some(RunInfo {
            workers: outcome.workers,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        });
    }
    let bytes = match outcome.output.format {
        Format::Csv => outcome.record.to_csv()?,
        Format::Json => outcome.record.to_json()?,
    };
    match &outcome.output.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(outcome.all_passed)
}
