//! `mafia-odds`: exact and approximate winning chances, evolution tables and
//! simulations for the random-lynch Mafia game.
//!
//! Exit codes: 0 success, 1 computation-domain error, 2 argument error.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Boundary, CliError, Method, Mode};
use output::OutputFormat;

/// Caps simulation parallelism; 0 or unset means one thread per core.
const THREADS_ENV: &str = "MAFIA_ODDS_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mafia-odds",
    version,
    about = "Winning chances in the random-lynch Mafia game"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    format: OutputFormat,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mafia winning chance for one game state.
    Winchance {
        #[arg(short = 'n', long)]
        players: u64,
        #[arg(short = 'm', long)]
        mafia: u64,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Boundary::Strict)]
        boundary: Boundary,
    },
    /// Exact winning chance for every state up to --max-n players.
    Table {
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Boundary::Strict)]
        boundary: Boundary,
    },
    /// Single-mafia winning chance with its parity-aware approximation.
    SingleMafia {
        #[arg(long)]
        max_n: u64,
    },
    /// Distribution and mean of the mafia count over time.
    Evolve {
        #[arg(short = 'n', long)]
        players: u64,
        #[arg(short = 'm', long)]
        mafia: u64,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Last turn to report; defaults to the end of the validity window
        /// (discrete, both) or to N/2 (continuous).
        #[arg(long)]
        t_max: Option<u64>,
        /// Continuous-time samples per turn.
        #[arg(long, default_value_t = 8)]
        samples_per_unit: u64,
    },
    /// Mafia size closest to a fair game, exact and approximate.
    Optimal {
        #[arg(long)]
        max_n: u64,
    },
    /// Monte Carlo estimate of the winning chance.
    Simulate {
        #[arg(short = 'n', long)]
        players: u64,
        #[arg(short = 'm', long)]
        mafia: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Boundary::Strict)]
        boundary: Boundary,
    },
}

fn simulation_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Domain(format!("cannot start worker threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let table = match cli.command {
        Command::Winchance {
            players,
            mafia,
            method,
            boundary,
        } => commands::winchance(players, mafia, method, boundary),
        Command::Table { max_n, boundary } => commands::table(max_n, boundary),
        Command::SingleMafia { max_n } => commands::single_mafia(max_n),
        Command::Evolve {
            players,
            mafia,
            mode,
            t_max,
            samples_per_unit,
        } => commands::evolve(players, mafia, mode, t_max, samples_per_unit),
        Command::Optimal { max_n } => commands::optimal(max_n),
        Command::Simulate {
            players,
            mafia,
            trials,
            seed,
            boundary,
        } => simulation_pool()?.install(|| commands::simulate(players, mafia, trials, seed, boundary)),
    }?;
    let text = table.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    written.map_err(|e| CliError::Domain(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
