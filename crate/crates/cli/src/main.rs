//! Experiment harness for the Fourier-sparse learning laboratory.
//!
//! Subcommands: `learn-sparse` runs the two-phase learner on seeded planted
//! instances, `chang-scan` exhaustively verifies the structural bounds on
//! small functions, `query-learn` drives the entropy-greedy membership-query
//! learner over a concept class, `adv-cert` prints the balanced-split
//! certificate of a class, and `gen-function` emits planted spectra.
//!
//! Every subcommand is deterministic given its full flag set: runs derive
//! their seeds from the master seed, worker pools merge results in seed
//! order, and floats are formatted with fixed precision.

mod adv_cert;
mod chang_scan;
mod classes;
mod error;
mod gen_function;
mod learn_sparse;
mod output;
mod query_learn;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fsparse", version, about = "Fourier-sparse learning laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn seeded planted sparse functions and tabulate the runs.
    LearnSparse(learn_sparse::LearnSparseArgs),
    /// Exhaustively verify structural bounds over all small functions.
    ChangScan(chang_scan::ChangScanArgs),
    /// Run the entropy-greedy membership-query learner over a class.
    QueryLearn(query_learn::QueryLearnArgs),
    /// Print the balanced-split certificate of a concept class.
    AdvCert(adv_cert::AdvCertArgs),
    /// Emit a planted sparse-spectrum fixture.
    GenFunction(gen_function::GenFunctionArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::LearnSparse(args) => learn_sparse::run(args),
        Command::ChangScan(args) => chang_scan::run(args),
        Command::QueryLearn(args) => query_learn::run(args),
        Command::AdvCert(args) => adv_cert::run(args),
        Command::GenFunction(args) => gen_function::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
