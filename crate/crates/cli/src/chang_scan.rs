use std::path::PathBuf;

use clap::Args;
use fsparse_core::chang::{scan_range, ChangReport, ScanCheck};

use crate::error::CliError;
use crate::output::{fmt_float, run_indexed, write_output, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WhichArg {
    Improved,
    Original,
    Weight,
    Granularity,
    All,
}

impl From<WhichArg> for ScanCheck {
    fn from(value: WhichArg) -> Self {
        match value {
            WhichArg::Improved => ScanCheck::Improved,
            WhichArg::Original => ScanCheck::Original,
            WhichArg::Weight => ScanCheck::Weight,
            WhichArg::Granularity => ScanCheck::Granularity,
            WhichArg::All => ScanCheck::All,
        }
    }
}

/// Exhaustively verify the structural bounds over all n-variable functions.
#[derive(Debug, Args)]
pub struct ChangScanArgs {
    /// Number of variables (at most 4; the scan covers all 2^(2^n) tables).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub which: WhichArg,
    /// Worker threads over table ranges; reports merge deterministically.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

pub fn run(args: &ChangScanArgs) -> Result<(), CliError> {
    if args.n > 4 {
        return Err(CliError::Usage(format!(
            "scan too large: n = {} exceeds 4",
            args.n
        )));
    }
    let check: ScanCheck = args.which.into();
    let total = 1u64 << (1 << args.n);
    let chunks = args.jobs.clamp(1, 64) as u64;
    let chunk = total.div_ceil(chunks);
    let partials = run_indexed(chunks as usize, args.jobs, |idx| {
        let start = idx as u64 * chunk;
        let end = (start + chunk).min(total);
        scan_range(args.n, check, start, end).expect("validated range")
    });
    let report = partials
        .into_iter()
        .reduce(ChangReport::merge)
        .expect("at least one chunk");

    let content = match args.format {
        OutputFormat::Json => {
            let mut text = report.to_json();
            text.push('\n');
            text
        }
        OutputFormat::Csv => render_csv(&report),
    };
    write_output(&args.out, &content)?;

    if report.holds() {
        Ok(())
    } else {
        Err(CliError::Violation(format!(
            "{} violation(s) found in the {} scan at n={}",
            report.violations.len(),
            report.check,
            report.n
        )))
    }
}

fn render_csv(report: &ChangReport) -> String {
    let mut out = String::new();
    out.push_str("table_id,check,quantity,bound\n");
    for v in &report.violations {
        out.push_str(&format!(
            "{},{},{},{}\n",
            v.table_id,
            v.check,
            fmt_float(v.quantity),
            fmt_float(v.bound)
        ));
    }
    out.push_str(&format!(
        "# scan n={} check={} functions_checked={} violations={}\n",
        report.n,
        report.check,
        report.functions_checked,
        report.violations.len()
    ));
    out.push_str(&format!(
        "# max_tightness={} max_dimension_ratio={} base_disagreements={}\n",
        fmt_float(report.max_tightness),
        fmt_float(report.max_dimension_ratio),
        report.base_disagreements
    ));
    out
}
