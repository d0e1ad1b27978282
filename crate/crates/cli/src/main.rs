//! `residual`: enumerate and verify residual subspaces from the command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 resource cap hit,
//! 3 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "residual",
    version,
    about = "Residual subspaces of shifted root hyperplane arrangements"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate residual flats and group them into Weyl orbits.
    Enumerate(EnumerateArgs),
    /// Run the structural checks on an enumerated table.
    Verify(VerifyArgs),
    /// Orbit counts along a grid of parameter ratios.
    Scan(ScanArgs),
    /// Weighted Dynkin diagrams at equal parameters, with orbit counts.
    Dynkin(DynkinArgs),
    /// Rank one Plancherel decomposition of the trace density.
    Plancherel(PlancherelArgs),
    /// Compare the enumerator against the brute-force oracle.
    DiffOracle(DiffOracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Root system label, e.g. B3 or A2xA1.
    #[arg(long = "type")]
    pub type_label: String,
    /// Parameters per length class as fractions, e.g. long=1,short=1/2 or all=1.
    #[arg(long)]
    pub params: Option<String>,
    /// Stop with exit code 2 after this many residual flats.
    #[arg(long)]
    pub max_flats: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Result cache directory (also read from RESIDUAL_CACHE_DIR).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Comma-separated subset of checks (T1a,T1b,T2,T3,T5B,L4.1,CHAIN,CLOSURE).
    #[arg(long)]
    pub checks: Option<String>,
    /// Also diff the table against the brute-force oracle (rank ≤ 4).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long = "type")]
    pub type_label: String,
    /// Comma-separated short/long ratios, e.g. 1/4,1/2,1,2,4.
    #[arg(long)]
    pub ratios: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DynkinArgs {
    #[arg(long = "type")]
    pub type_label: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PlancherelArgs {
    /// Hecke parameter, as a fraction or a decimal.
    #[arg(long)]
    pub q: String,
    /// Also write the sampled density as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DiffOracleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Scan(a) => commands::scan(a),
        Command::Dynkin(a) => commands::dynkin(a),
        Command::Plancherel(a) => commands::plancherel(a),
        Command::DiffOracle(a) => commands::diff_oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
