use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use torbun::commands::{self, Command, Options};
use torbun::problem::Problem;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "kebab-case")]
enum Cmd {
    CheckFan,
    CheckBalancing,
    MwProduct,
    PpToMw,
    EquivMult,
    Residue,
    Presentation,
    Subbundle,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::CheckFan => Command::CheckFan,
            Cmd::CheckBalancing => Command::CheckBalancing,
            Cmd::MwProduct => Command::MwProduct,
            Cmd::PpToMw => Command::PpToMw,
            Cmd::EquivMult => Command::EquivMult,
            Cmd::Residue => Command::Residue,
            Cmd::Presentation => Command::Presentation,
            Cmd::Subbundle => Command::Subbundle,
        }
    }
}

/// Exact Chow theory of toric variety bundles.
///
/// Exit codes: 0 success, 2 validation failure, 3 mathematical assertion
/// failure, 4 genericity search exhausted.
#[derive(Debug, Parser)]
#[command(name = "torbun", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Problem file (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Displacement vector, e.g. "2,1". Overrides the file's displacement.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    /// Seed for the generic vector search. TORBUN_SEED takes precedence.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Recompute the product with a second generic vector and compare.
    #[arg(long)]
    cross_check: bool,
    /// Compare the product with the Chow ring of a smooth complete fan.
    #[arg(long)]
    oracle: bool,
    /// Maximal cone for equiv-mult, e.g. "1,2".
    #[arg(long)]
    sigma: Option<String>,
    /// Face for equiv-mult or residue, e.g. "1" or "0".
    #[arg(long)]
    tau: Option<String>,
    /// Emit the equivariant presentation.
    #[arg(long)]
    equivariant: bool,
    /// Weight names to use, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
    /// Candidates tried by the generic vector search [default: 1000].
    #[arg(long)]
    max_attempts: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match std::env::var("TORBUN_SEED") {
        Ok(s) => match s.trim().parse() {
            Ok(n) => n,
            Err(_) => {
                eprintln!("error: TORBUN_SEED must be a non-negative integer, got '{s}'");
                return ExitCode::from(commands::EXIT_VALIDATION as u8);
            }
        },
        Err(_) => cli.seed,
    };
    let opts = Options {
        v: cli.v,
        seed,
        cross_check: cli.cross_check,
        oracle: cli.oracle,
        sigma: cli.sigma,
        tau: cli.tau,
        equivariant: cli.equivariant,
        weights: cli.weights,
        max_attempts: cli.max_attempts,
    };
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(commands::EXIT_VALIDATION as u8);
        }
    };
    let result = Problem::from_json(&text).and_then(|p| commands::run(cli.command.into(), &p, &opts));
    match result {
        Ok(report) => {
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Table => print!("{}", report.to_table()),
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
