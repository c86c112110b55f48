//! `polysum`: command-line access to the polygonal counting and circle-method
//! library.

mod commands;
mod output;
mod params;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "polysum", version, about = "Sums of polygonal numbers: counts, identities and the circle method")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads for parallel sections. Results do not depend on it.
    #[arg(long, global = true, env = "POLYSUM_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Representation counts r, r+, r* or the congruence counts s, s*.
    Count(commands::count::CountArgs),
    /// Run one named identity check; exits 1 when it fails.
    Verify(commands::verify::VerifyArgs),
    /// Exact counts against the Eisenstein main terms.
    Asymptotics(commands::asymptotics::AsymptoticsArgs),
    /// A coefficient recovered by integrating over the Farey arcs.
    Contour(commands::contour::ContourArgs),
    /// The Farey arcs of one order.
    Farey(commands::misc::FareyArgs),
    /// Exact q-series as JSON or coefficient rows.
    Series(commands::misc::SeriesArgs),
    /// Direct-versus-transformed comparison points.
    Grid(commands::misc::GridArgs),
}

/// Anything that stops a command before it produces a report.
#[derive(Debug)]
pub enum CliError {
    /// Inconsistent or out-of-range arguments; exit 2 like clap's own errors.
    Usage(String),
    /// A computation or I/O failure; exit 3.
    Runtime(String),
}

impl From<polysum::Error> for CliError {
    fn from(e: polysum::Error) -> Self {
        match e {
            polysum::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn run(cli: Cli) -> CliResult<Report> {
    match cli.command {
        Command::Count(a) => commands::count::run(a),
        Command::Verify(a) => commands::verify::run(a),
        Command::Asymptotics(a) => commands::asymptotics::run(a),
        Command::Contour(a) => commands::contour::run(a),
        Command::Farey(a) => commands::misc::farey(a),
        Command::Series(a) => commands::misc::series(a),
        Command::Grid(a) => commands::misc::grid(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            match report.write(format, &mut out).and_then(|_| out.flush()) {
                // A closed reader, as with `| head`, is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
                Ok(()) => {}
            }
            match report.passed {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
