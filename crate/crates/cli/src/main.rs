use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{CommandResult, Context};

/// Exact Schubert calculus: Schubert polynomials, structure constants,
/// positivity, and mod-p witnesses for polynomial systems.
#[derive(Debug, Parser)]
#[command(name = "schubert", version)]
struct Cli {
    /// Largest permutation rank (trailing fixed points trimmed) the kernel accepts.
    #[arg(long, global = true, env = "SCHUBERT_RANK_BOUND", default_value_t = schubert_core::DEFAULT_RANK_BOUND)]
    rank_bound: usize,

    /// Largest number of points scanned per prime by witness search/count.
    #[arg(long, global = true, env = "SCHUBERT_BUDGET", default_value_t = schubert_core::DEFAULT_BUDGET)]
    budget: u64,

    /// Print only the JSON payload.
    #[arg(long, global = true)]
    json: bool,

    /// Print nothing; report the answer through the exit code.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Schubert polynomial of a permutation.
    Poly { w: String },
    /// Print the coefficient of x^alpha in Sch_w; alpha is comma-separated.
    Kostka { w: String, alpha: String },
    /// List the reduced pipe dreams of a permutation.
    Pipedreams {
        w: String,
        /// Print only the number of pipe dreams.
        #[arg(long)]
        count: bool,
    },
    /// Print the Schubert coefficient c^w_{u,v}.
    Coeff { u: String, v: String, w: String },
    /// Expand Sch_u * Sch_v in the Schubert basis.
    Expand { u: String, v: String },
    /// Decide whether c^w_{u,v} > 0.
    Positive { u: String, v: String, w: String },
    /// Tabulate every nonzero c^w_{u,v} with u, v in S_n as CSV.
    Table {
        n: usize,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Largest n accepted.
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Check a mod-p certificate against a polynomial system.
    WitnessVerify {
        system: PathBuf,
        certificate: PathBuf,
    },
    /// Search F_p^s for a common zero, trying the primes in order.
    WitnessSearch {
        system: PathBuf,
        #[arg(required = true, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Count the common zeros in F_p^s.
    WitnessCount { system: PathBuf, prime: u64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context::new(cli.rank_bound, cli.budget);
    let result = match cli.command {
        Command::Poly { w } => ctx.poly(&w),
        Command::Kostka { w, alpha } => ctx.kostka(&w, &alpha),
        Command::Pipedreams { w, count } => ctx.pipedreams(&w, count),
        Command::Coeff { u, v, w } => ctx.coeff(&u, &v, &w),
        Command::Expand { u, v } => ctx.expand(&u, &v),
        Command::Positive { u, v, w } => ctx.positive(&u, &v, &w, cli.quiet),
        Command::Table { n, output, max_n } => ctx.table(n, max_n, output.as_deref()),
        Command::WitnessVerify {
            system,
            certificate,
        } => ctx.witness_verify(&system, &certificate),
        Command::WitnessSearch { system, primes } => ctx.witness_search(&system, &primes),
        Command::WitnessCount { system, prime } => ctx.witness_count(&system, prime),
    };
    emit(result, cli.json, cli.quiet)
}

fn emit(result: Result<CommandResult, commands::Failure>, json: bool, quiet: bool) -> ExitCode {
    match result {
        Ok(res) => {
            if !quiet {
                if json {
                    println!("{}", res.payload);
                } else if !res.human.is_empty() {
                    println!("{}", res.human);
                }
            }
            ExitCode::from(res.exit_code)
        }
        Err(fail) => {
            if json && !quiet {
                println!("{}", fail.to_json());
            }
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.kind.exit_code())
        }
    }
}
