//! `aam`: atom-atom maps, LP export and network-completion candidates from
//! the command line.

mod input;
mod map;
mod pool;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aam", version, about = "Minimum-cost atom-atom maps of balanced reactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every optimal atom-atom map of a reaction document, up to equivalence.
    Map(MapArgs),
    /// Propose balanced candidate reactions from a molecule pool and filter them by transition-state length.
    Candidates(CandidateArgs),
    /// Isomer-set and participation distributions of a molecule pool, as CSV.
    Stats(StatsArgs),
    /// Write the ILP model of a reaction document in CPLEX LP format.
    ExportLp(ExportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Altcyc,
    Ilp2,
    Ilp4,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// The ordered step list of the alternating-cycle search.
    Mechanism,
    Lp,
    Csv,
}

#[derive(Args, Clone)]
pub struct SolveFlags {
    #[arg(long, value_enum, default_value = "altcyc")]
    pub solver: Solver,
    /// Largest map cost (transition-state length) searched.
    #[arg(long, alias = "k-max")]
    pub max_cost: Option<u32>,
    /// Keep only maps with a connected transition state.
    #[arg(long)]
    pub connected: bool,
    /// Search single elementary cycles only.
    #[arg(long)]
    pub elementary: bool,
    #[arg(long)]
    pub timeout_ms: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct MapArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub solve: SolveFlags,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct CandidateArgs {
    pub pool: PathBuf,
    #[command(flatten)]
    pub solve: SolveFlags,
    /// Solve a seeded random sample of N candidates instead of all.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Drop candidates with a molecule on both sides.
    #[arg(long)]
    pub cancel_spectators: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args)]
pub struct StatsArgs {
    pub pool: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args)]
pub struct ExportArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ilp2")]
    pub solver: Solver,
    /// Output file; standard output if absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Process exit codes.
pub mod exit {
    pub const OTHER: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const UNBALANCED: u8 = 3;
    pub const BOUND_EXHAUSTED: u8 = 4;
    pub const TIMEOUT: u8 = 5;
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(exit::OTHER, e)
    }
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Failure::new(exit::OTHER, e))?;
            Ok(pool.install(f))
        }
    }
}

/// Writes to standard output; a closed pipe ends output quietly.
pub fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Map(a) => map::run_map(&a),
        Command::ExportLp(a) => map::run_export(&a),
        Command::Candidates(a) => pool::run_candidates(&a),
        Command::Stats(a) => pool::run_stats(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("aam: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
