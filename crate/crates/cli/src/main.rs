//! `powerlog`: check, reduce, expand, certify and evaluate power-log series
//! solutions from a problem file.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use powerlog::Error;

#[derive(Parser, Debug)]
#[command(name = "powerlog", version, about = "Exact power-log series solutions of algebraic ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the nondegeneracy condition on the seed.
    Check(Common),
    /// Reduce the equation to L(δ)u = x·M.
    Reduce(Common),
    /// Expand the formal solution.
    Expand(Common),
    /// Run the norm estimates and the majorant inequality.
    Certify(Common),
    /// Evaluate the truncated series numerically.
    Evaluate(Numeric),
    /// Numeric residuals |F(x, φ_N, …)| for N = 1…to.
    Residual(Numeric),
    /// Full pipeline as one JSON document.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Expansion order N.
    #[arg(long = "to")]
    pub to: Option<usize>,
    /// Extra x-orders used by the condition check.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Floating precision in bits.
    #[arg(long)]
    pub precision: Option<usize>,
    /// Sector as RADIUS,OPENING_DEG,BISECTOR_DEG.
    #[arg(long)]
    pub sector: Option<String>,
    /// Derive ansatz pole orders from indicial polynomials.
    #[arg(long)]
    pub exact_bounds: bool,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Numeric {
    #[command(flatten)]
    pub common: Common,
    /// Evaluation point RE,IM (repeatable); defaults to the sector grid.
    #[arg(long = "x", allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// Also write the numeric table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    #[command(flatten)]
    pub numeric: Numeric,
    /// Run the stored oracle cases as well.
    #[arg(long)]
    pub with_oracles: bool,
    /// Directory of oracle cases (default: `oracles/` next to the problem file).
    #[arg(long)]
    pub oracles_dir: Option<PathBuf>,
}

/// Process exit status for an error.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConditionFailed(_) | Error::Indeterminate { .. } => 2,
        Error::Syntax { .. } | Error::InvalidProblem(_) | Error::Io(_) | Error::InvalidSector(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Check(c) => commands::check(c),
        Command::Reduce(c) => commands::reduce(c),
        Command::Expand(c) => commands::expand(c),
        Command::Certify(c) => commands::certify(c),
        Command::Evaluate(n) => commands::evaluate(n),
        Command::Residual(n) => commands::residual(n),
        Command::Report(r) => commands::report(r),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", render::error_json(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
