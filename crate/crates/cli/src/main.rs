//! `substoch`: command-line front end for the substoch library.
//!
//! Exit codes: 0 success (or "true"), 1 a checked property is false, 2 input
//! error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "substoch", version, about = "Exact analysis of doubly substochastic matrices")]
struct Cli {
    /// Emit {"command", "result", "witness"} JSON with fractions as strings.
    #[arg(long, global = true)]
    json: bool,
    /// Print terminating rationals as exact decimals in human output.
    #[arg(long, global = true)]
    decimal: bool,
    /// Worker threads for parallel library paths (1 runs sequentially).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, element sum, sub-defect and line sums.
    Classify {
        /// Matrix file, or `-` for stdin.
        file: PathBuf,
    },
    /// Extreme-point test with a witness when the answer is no.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckPolytope::Sum)]
        polytope: CheckPolytope,
        /// Sub-defect class for `--polytope subdefect` (default: the matrix's own).
        #[arg(long)]
        k: Option<usize>,
        /// Cross-check with the active-constraint rank test (order capped by
        /// SUBSTOCH_ORACLE_LIMIT, default 8).
        #[arg(long)]
        oracle: bool,
    },
    /// Support bipartite graph: edges, cycle, components, perturbability.
    Graph { file: PathBuf },
    /// Jurkat-Ryser construction of a transportation vertex.
    Construct {
        #[command(flatten)]
        profile: ProfileArgs,
        /// 1-based row/column pairs, e.g. "1,1 4,2 2,2"; north-west rule if absent.
        #[arg(long)]
        pivots: Option<String>,
        #[arg(long, value_enum, default_value_t = Tie::Row)]
        tie: Tie,
    },
    /// List the extreme points of a transportation or fixed-sum polytope.
    Enumerate {
        #[arg(long, value_enum)]
        polytope: EnumPolytope,
        #[command(flatten)]
        profile: OptionalProfileArgs,
        /// Order (fixed-sum polytope).
        #[arg(long)]
        n: Option<usize>,
        /// Element sum (fixed-sum polytope).
        #[arg(long)]
        s: Option<String>,
        /// One representative per row/column permutation class.
        #[arg(long)]
        orbits: bool,
        #[arg(long, default_value_t = substoch::construction::DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Convex combination of extreme points reproducing the matrix.
    Decompose {
        file: PathBuf,
        /// Decompose over the extreme points of the sub-defect class.
        #[arg(long)]
        subdefect: bool,
        #[arg(long, value_enum, default_value_t = Strategy::Peel)]
        strategy: Strategy,
    },
    /// Diagonal-sum and permanent inequalities.
    Bounds {
        #[command(subcommand)]
        check: BoundsCommand,
    },
    /// Print B_m(alpha).
    Bmatrix { m: usize, alpha: String },
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Maximum diagonal sum h(A) with an optimal permutation.
    Diagonal { file: PathBuf },
    /// per(A) against (sigma/n)^n and ((n-k+1)/n)^n.
    Permanent { file: PathBuf },
    /// h(A)+h(B)-h(AB) for two matrices of equal sub-defect.
    H { first: PathBuf, second: PathBuf },
    /// Search per(I-A) over omega_n^s against the closed-form maximum.
    PerIMinusA {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Row sums, separated by spaces or commas.
    #[arg(long)]
    rows: String,
    /// Column sums, separated by spaces or commas.
    #[arg(long)]
    cols: String,
}

#[derive(Args, Debug)]
struct OptionalProfileArgs {
    #[arg(long)]
    rows: Option<String>,
    #[arg(long)]
    cols: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckPolytope {
    Transportation,
    Sum,
    Subdefect,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnumPolytope {
    Transportation,
    Sum,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    /// Subtract extreme points of the current face one at a time.
    Peel,
    /// Split into two pieces and recurse on both.
    Split,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Row,
    Column,
}

fn execution(jobs: Option<usize>) -> substoch::Execution {
    match jobs {
        Some(1) => substoch::Execution::Sequential,
        _ => substoch::Execution::Parallel,
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, String> {
    let exec = execution(cli.jobs);
    let fmt = Format { decimal: cli.decimal };
    match &cli.command {
        Command::Classify { file } => commands::classify(file, &fmt),
        Command::Check {
            file,
            polytope,
            k,
            oracle,
        } => commands::check(file, *polytope, *k, *oracle, &fmt),
        Command::Graph { file } => commands::graph(file, &fmt),
        Command::Construct { profile, pivots, tie } => {
            commands::construct(&profile.rows, &profile.cols, pivots.as_deref(), *tie, &fmt)
        }
        Command::Enumerate {
            polytope,
            profile,
            n,
            s,
            orbits,
            limit,
        } => commands::enumerate(
            *polytope,
            profile.rows.as_deref(),
            profile.cols.as_deref(),
            *n,
            s.as_deref(),
            *orbits,
            *limit,
            exec,
            &fmt,
        ),
        Command::Decompose {
            file,
            subdefect,
            strategy,
        } => {
            let strategy = match strategy {
                Strategy::Peel => substoch::decomposition::DecompositionStrategy::Peel,
                Strategy::Split => substoch::decomposition::DecompositionStrategy::Split,
            };
            commands::decompose(file, *subdefect, strategy, exec, &fmt)
        }
        Command::Bounds { check } => match check {
            BoundsCommand::Diagonal { file } => commands::diagonal(file, &fmt),
            BoundsCommand::Permanent { file } => commands::permanent(file, &fmt),
            BoundsCommand::H { first, second } => commands::h_inequality(first, second, &fmt),
            BoundsCommand::PerIMinusA { n, s, samples, seed } => {
                commands::per_i_minus_a(*n, s, *samples, *seed, exec, &fmt)
            }
        },
        Command::Bmatrix { m, alpha } => commands::bmatrix(*m, alpha, &fmt),
    }
}

#[cfg(feature = "parallel")]
fn run_with_jobs(cli: &Cli) -> Result<Outcome, String> {
    match cli.jobs {
        Some(jobs) if jobs > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| format!("cannot start {jobs} worker threads: {e}"))?
            .install(|| dispatch(cli)),
        _ => dispatch(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_jobs(cli: &Cli) -> Result<Outcome, String> {
    dispatch(cli)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    match run_with_jobs(&cli) {
        Ok(outcome) => {
            let name = commands::command_name(&cli.command);
            if cli.json {
                println!("{}", outcome.json(name));
            } else {
                print!("{}", outcome.human);
                if !outcome.human.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
