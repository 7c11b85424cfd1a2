use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use swapreach_cli::commands::{self, Format, GenKind, Options, Outcome, ERROR, YES};
use swapreach_cli::files::load_instance;

/// Object reachability under rational swaps on social networks.
///
/// Exit status: 0 yes, 1 no, 2 error.
#[derive(Parser)]
#[command(name = "swapreach", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print solver statistics.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// State cap for exhaustive search.
    #[arg(long, global = true, default_value_t = swapreach::oracle::DEFAULT_CAP)]
    cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Answer the reach query with the polynomial solver for the network.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        agent: Option<usize>,
        #[arg(long)]
        object: Option<usize>,
        /// Use exhaustive search, whatever the network.
        #[arg(long)]
        oracle: bool,
    },
    /// Answer the reach query by exhaustive search.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        agent: Option<usize>,
        #[arg(long)]
        object: Option<usize>,
    },
    /// Replay a swap sequence such as "1-2 2-3".
    Verify {
        instance: PathBuf,
        swaps: String,
        /// Also require the file's reach query to hold at the end.
        #[arg(long)]
        check_query: bool,
    },
    /// List the Pareto optimal reachable assignments.
    Pareto { instance: PathBuf },
    /// Maximum welfare over reachable assignments.
    Welfare {
        instance: PathBuf,
        /// Exit 0 only if this welfare is reachable; defaults to the file's query threshold.
        #[arg(long)]
        threshold: Option<i64>,
    },
    /// 2P1N formula (DIMACS) to a weak-preference path instance.
    ReduceSat {
        formula: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Digraph with a start vertex to a star instance with values.
    ReduceHam {
        digraph: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Seeded random instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: String, output: Option<&Path>) -> Result<Outcome> {
    match output {
        Some(p) => {
            std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(Outcome {
                code: YES,
                report: format!("wrote {}\n", p.display()),
            })
        }
        None => Ok(Outcome {
            code: YES,
            report: text,
        }),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let opts = Options {
        format: cli.format,
        verbose: cli.verbose,
        cap: cli.cap,
    };
    match cli.command {
        Command::Solve {
            instance,
            agent,
            object,
            oracle,
        } => {
            let (inst, q) = load_instance(&instance)?;
            let (k, o) = commands::reach_query(q.as_ref(), agent, object)?;
            commands::solve(&inst, k, o, oracle, &opts)
        }
        Command::Oracle {
            instance,
            agent,
            object,
        } => {
            let (inst, q) = load_instance(&instance)?;
            let (k, o) = commands::reach_query(q.as_ref(), agent, object)?;
            commands::solve(&inst, k, o, true, &opts)
        }
        Command::Verify {
            instance,
            swaps,
            check_query,
        } => {
            let (inst, q) = load_instance(&instance)?;
            let seq = commands::parse_swaps(&swaps)?;
            let target = if check_query {
                Some(commands::reach_query(q.as_ref(), None, None)?)
            } else {
                None
            };
            commands::verify(&inst, &seq, target, &opts)
        }
        Command::Pareto { instance } => {
            let (inst, _) = load_instance(&instance)?;
            commands::pareto(&inst, &opts)
        }
        Command::Welfare {
            instance,
            threshold,
        } => {
            let (inst, q) = load_instance(&instance)?;
            let threshold = threshold.or_else(|| q.and_then(|q| q.threshold));
            commands::max_welfare(&inst, threshold, &opts)
        }
        Command::ReduceSat { formula, output } => {
            emit(commands::reduce_sat(&read(&formula)?)?, output.as_deref())
        }
        Command::ReduceHam { digraph, output } => {
            emit(commands::reduce_ham(&read(&digraph)?)?, output.as_deref())
        }
        Command::Gen {
            kind,
            n,
            seed,
            output,
        } => emit(commands::generate(kind, n, seed)?, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                ERROR as u8
            } else {
                YES as u8
            });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.report);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR as u8)
        }
    }
}
