use std::path::PathBuf;

use clap::Args;
use fsparse_core::fourier::random_sparse_function;

use crate::error::CliError;
use crate::output::{write_output, OutputFormat};

/// Emit a planted sparse-spectrum fixture as JSON.
#[derive(Debug, Args)]
pub struct GenFunctionArgs {
    /// Ambient number of variables.
    #[arg(long)]
    pub n: usize,
    /// Sparsity bound (at least 2).
    #[arg(long)]
    pub k: usize,
    /// Fourier dimension of the planted function (at most min(n, 4)).
    #[arg(long = "r-core")]
    pub r_core: usize,
    #[arg(long, env = "FSPARSE_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

pub fn run(args: &GenFunctionArgs) -> Result<(), CliError> {
    if args.format != OutputFormat::Json {
        return Err(CliError::Usage("gen-function only emits json".into()));
    }
    let spectrum = random_sparse_function(args.n, args.k, args.r_core, args.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = spectrum.to_json();
    text.push('\n');
    write_output(&args.out, &text)?;
    Ok(())
}
