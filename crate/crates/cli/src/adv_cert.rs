use std::path::PathBuf;

use clap::Args;
use fsparse_core::query::{certify_split, QueryError};

use crate::classes::ClassArgs;
use crate::error::CliError;
use crate::output::{fmt_float, write_output, OutputFormat};

/// Compute the balanced-split certificate of a concept class: the coordinate
/// with the largest masked norm, its split mass, and the certified threshold.
#[derive(Debug, Args)]
pub struct AdvCertArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

pub fn run(args: &AdvCertArgs) -> Result<(), CliError> {
    let cc = args.class.load()?;
    let cert = certify_split(&cc).map_err(|e| match e {
        QueryError::TooConcentrated { max_mass } => CliError::Precondition(format!(
            "distribution too concentrated: max mass {max_mass} > 5/6"
        )),
        other => CliError::Precondition(other.to_string()),
    })?;

    let content = match args.format {
        OutputFormat::Csv => format!(
            "index,split,threshold,gamma_norm,max_masked_norm,ratio\n{},{},{},{},{},{}\n",
            cert.index,
            fmt_float(cert.split),
            fmt_float(cert.threshold),
            fmt_float(cert.gamma_norm),
            fmt_float(cert.max_masked_norm),
            fmt_float(cert.ratio)
        ),
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "class": args.class.describe(),
                "index": cert.index,
                "split": cert.split,
                "threshold": cert.threshold,
                "gamma_norm": cert.gamma_norm,
                "max_masked_norm": cert.max_masked_norm,
                "ratio": cert.ratio,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
            text.push('\n');
            text
        }
    };
    write_output(&args.out, &content)?;

    if cert.split >= cert.threshold {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "certified split {} fell below threshold {}",
            cert.split, cert.threshold
        )))
    }
}
