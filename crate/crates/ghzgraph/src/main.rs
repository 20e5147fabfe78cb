use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghzgraph::commands::{self, CliError, Format};
use ghzgraph_core::Blocking;

/// Graph codes over F_p, the GHZ erasure code and their concatenation.
#[derive(Parser, Debug)]
#[command(name = "ghzgraph", version)]
struct Cli {
    /// Graph file; defaults to the built-in five-qubit decoding graph.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Expected field size; checked against the graph.
    #[arg(long, global = true)]
    p: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the admissibility conditions for `e` erasures.
    VerifyGraph {
        #[arg(long, default_value_t = 1)]
        e: usize,
    },
    /// Syndrome table for every single-qubit error.
    SyndromeTable {
        /// Only the error-free row.
        #[arg(long)]
        no_errors: bool,
    },
    /// One pass through the concatenated code with an erasure and an error.
    WorkedExample {
        #[arg(long, default_value = "1")]
        erasure_pos: String,
        /// `none`, or a word over B/S followed by a GHZ position, e.g. `B1'`.
        #[arg(long, default_value = "B1'")]
        error: String,
    },
    /// Estimate the effective logical channel.
    MonteCarlo {
        /// identity, correctable or two-pauli
        #[arg(long, default_value = "correctable")]
        noise: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Encode each outer qubit in its own GHZ block of this size.
        #[arg(long)]
        blocking: Option<usize>,
    },
    /// GHZ encoder, decoder and recovery programs.
    DumpPrograms {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        erasure_pos: Option<String>,
        /// One gate per line in execution order.
        #[arg(long)]
        gates: bool,
    },
}

fn run(cli: Cli) -> Result<commands::Output, CliError> {
    let graph = || commands::load_graph(cli.graph.as_deref(), cli.p);
    match cli.command {
        Command::VerifyGraph { e } => commands::verify_graph(&graph()?, e, cli.format),
        Command::SyndromeTable { no_errors } => {
            commands::syndrome_table(&graph()?, no_errors, cli.format)
        }
        Command::WorkedExample { erasure_pos, error } => {
            commands::worked_example(&graph()?, &erasure_pos, &error, cli.seed, cli.format)
        }
        Command::MonteCarlo {
            noise,
            trials,
            blocking,
        } => {
            let noise = commands::parse_noise(&noise)?;
            let blocking = blocking.map_or(Blocking::WholeRegister, |n| Blocking::PerQubit { n });
            commands::monte_carlo(&graph()?, noise, blocking, trials, cli.seed, cli.format)
        }
        Command::DumpPrograms {
            n,
            erasure_pos,
            gates,
        } => commands::dump_programs(n, erasure_pos.as_deref(), gates, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
