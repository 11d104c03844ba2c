mod commands;
mod spec_args;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spec_args::SpecArgs;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O or numeric failure
  2  invalid arguments or experiment spec (nothing is written)
  3  too many realizations failed";

#[derive(Debug, Parser)]
#[command(name = "ergolab", version, about = "Eigenvector ergodicity ensembles", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one ensemble and write CSV/JSON results.
    #[command(after_help = EXIT_CODES)]
    Run(RunArgs),
    /// Tabulate a reference distribution.
    #[command(after_help = EXIT_CODES)]
    Reference(ReferenceArgs),
    /// Run a one-parameter family of ensembles.
    #[command(after_help = EXIT_CODES)]
    Sweep(SweepArgs),
    /// Export the state graph of one realization as an edge list.
    #[command(after_help = EXIT_CODES)]
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, env = "ERGOLAB_WORKERS")]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "both")]
    format: Format,
    /// Validate and print the resolved spec without running.
    #[arg(long)]
    dry_run: bool,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ReferenceKind {
    PoissonR,
    Surmise,
    Semicircle,
    KestenMckay,
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    #[arg(long, value_enum)]
    kind: ReferenceKind,
    /// Dyson index for the surmise (1, 2 or 4).
    #[arg(long, default_value_t = 1)]
    beta: u8,
    /// Graph degree for Kesten-McKay.
    #[arg(long, default_value_t = 3)]
    d: u32,
    /// Evaluation grid; defaults to 0:1:1001 for ratios and -2:2:1001 for densities.
    #[arg(long, value_name = "LO:HI:N")]
    grid: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep file: {"base": <spec>, "sweep": {"parameter": "model.params.lambda", "values": [...]}}.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, env = "ERGOLAB_WORKERS")]
    workers: Option<usize>,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Couplings with modulus at or below this are dropped.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// Which disorder realization to build.
    #[arg(long, default_value_t = 0)]
    realization: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Core(ergolab_core::error::Error),
}

impl From<ergolab_core::error::Error> for CliError {
    fn from(e: ergolab_core::error::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use ergolab_core::error::Error;
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(Error::EnsembleFailure { .. }) => 3,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => commands::run(&a),
        Command::Reference(a) => commands::reference(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Graph(a) => commands::graph(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
