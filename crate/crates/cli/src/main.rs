mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use scsp_core::report::DEFAULT_SEED;

use commands::{Outcome, Settings};

/// Solve, translate and check soft constraint problems over c-semirings.
///
/// Exit status: 0 on success, 1 when a checked property or theorem fails,
/// 2 on invalid input.
#[derive(Parser, Debug)]
#[command(name = "scsp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Evaluation budget: cap on enumerated assignments and exhaustive
    /// property checks.
    #[arg(long, global = true, env = "SCSP_BUDGET")]
    budget: Option<u64>,

    /// Worker threads. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the solution table and optimal tuples of a problem.
    Solve {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Print the problem obtained by mapping every constraint value.
    Translate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        mapping: PathBuf,
    },
    /// Solve the translated problem and pick the concretely best of its
    /// optima.
    Recover {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        mapping: PathBuf,
    },
    /// Check the semiring axioms (with --semiring only) or a mapping
    /// property.
    ///
    /// Properties: endpoints, monotonic, homomorphism, quasi-homomorphism,
    /// order-reflecting, isomorphism, galois-insertion, abstraction,
    /// order-preserving, aggregation-compatible (mapping properties; the
    /// adjoint ones need --gamma), sum-product-reflection (with --shape),
    /// quasi-bound and strengthened-bound (with --problem).
    Check {
        /// Built-in semiring name or descriptor file.
        #[arg(long)]
        semiring: Option<String>,
        #[arg(long)]
        mapping: Option<PathBuf>,
        /// Upper adjoint of the mapping.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long)]
        property: Option<String>,
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Matrix shape `NxM` (N summands of M factors) for
        /// sum-product-reflection.
        #[arg(long, default_value = "2x2")]
        shape: String,
        /// Largest multiset size for order-preserving and
        /// aggregation-compatible.
        #[arg(long, default_value_t = 3)]
        set_size: usize,
    },
    /// Run a theorem verification procedure, or `all` of them.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Directory receiving a reproducer file for each counterexample.
        #[arg(long, default_value = ".")]
        reproducer_dir: PathBuf,
    },
    /// Time brute-force solving on generated problems.
    Bench {
        /// Built-in semiring name or descriptor file.
        #[arg(long, default_value = "weighted")]
        semiring: String,
        #[arg(long, default_value_t = 10)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        domain: usize,
        #[arg(long, default_value_t = 12)]
        constraints: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 2)]
        con: usize,
        #[arg(long, default_value_t = 3)]
        instances: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let settings = Settings::new(cli.seed, cli.budget, cli.jobs);
    match cli.command {
        Command::Solve { problem } => commands::solve(&settings, &problem),
        Command::Translate { problem, mapping } => commands::translate(&problem, &mapping),
        Command::Recover { problem, mapping } => commands::recover(&problem, &mapping),
        Command::Check {
            semiring,
            mapping,
            gamma,
            property,
            problem,
            shape,
            set_size,
        } => commands::check(
            &settings,
            commands::CheckArgs {
                semiring,
                mapping,
                gamma,
                property,
                problem,
                shape,
                set_size,
            },
        ),
        Command::Verify {
            theorem,
            trials,
            reproducer_dir,
        } => commands::verify(&settings, &theorem, trials, &reproducer_dir),
        Command::Bench {
            semiring,
            vars,
            domain,
            constraints,
            arity,
            con,
            instances,
        } => commands::bench(
            &settings,
            &semiring,
            scsp_core::catalog::ProblemShape {
                vars,
                domain,
                constraints,
                arity,
                con,
                max_denominator: 16,
            },
            instances,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = (cli.format, cli.out.clone());
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let json = scsp_core::json::to_canonical_string(&outcome.json);
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{}", outcome.text),
    }
    ExitCode::from(if outcome.success { 0 } else { 1 })
}
