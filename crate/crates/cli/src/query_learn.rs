use std::path::PathBuf;

use clap::Args;
use fsparse_core::query::{certify_split, energy_trace, run_all_targets, spectral_ratio, Transcript};

use crate::classes::ClassArgs;
use crate::error::CliError;
use crate::output::{fmt_float, write_output, OutputFormat};

/// Run the entropy-greedy learner over every concept of a class as target
/// and emit the per-step transcripts with a summary.
#[derive(Debug, Args)]
pub struct QueryLearnArgs {
    #[command(flatten)]
    pub class: ClassArgs,
    /// Posterior mass at which a run commits to a concept.
    #[arg(long = "stop-mass", default_value_t = 5.0 / 6.0)]
    pub stop_mass: f64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

pub fn run(args: &QueryLearnArgs) -> Result<(), CliError> {
    if !(args.stop_mass > 0.5 && args.stop_mass <= 1.0) {
        return Err(CliError::Usage(format!(
            "--stop-mass {} not in (0.5, 1]",
            args.stop_mass
        )));
    }
    let cc = args.class.load()?;
    let transcripts = run_all_targets(&cc, args.stop_mass)
        .map_err(|e| CliError::Precondition(format!("learning failed: {e}")))?;
    let trace = energy_trace(&cc, &transcripts)
        .map_err(|e| CliError::Precondition(format!("energy accounting failed: {e}")))?;

    let ratio = spectral_ratio(&cc).ok();
    let split0 = certify_split(&cc).ok();

    let max_queries = transcripts.iter().map(Transcript::queries).max().unwrap_or(0);
    let mean_queries = transcripts.iter().map(Transcript::queries).sum::<usize>() as f64
        / transcripts.len().max(1) as f64;
    let correct = transcripts.iter().filter(|t| t.correct).count();
    let correct_rate = correct as f64 / transcripts.len().max(1) as f64;
    let reference = ratio.map(|a| {
        let c = cc.len() as f64;
        if a > 1.0 {
            (a * a / a.log2().max(f64::MIN_POSITIVE)) * c.log2()
        } else {
            c.log2()
        }
    });

    let content = match args.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str("target,t,index,bit,posterior_size,max_mass,posterior_entropy\n");
            for tr in &transcripts {
                for step in &tr.steps {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        tr.target,
                        step.t,
                        step.index,
                        u8::from(step.bit),
                        step.posterior_size,
                        fmt_float(step.max_mass),
                        fmt_float(step.posterior_entropy)
                    ));
                }
            }
            out.push_str(&format!(
                "# class={} concepts={} bits={} stop_mass={}\n",
                args.class.describe(),
                cc.len(),
                cc.n_bits(),
                fmt_float(args.stop_mass)
            ));
            out.push_str(&format!(
                "# queries max={max_queries} mean={} correct_rate={}\n",
                fmt_float(mean_queries),
                fmt_float(correct_rate)
            ));
            match (ratio, reference) {
                (Some(a), Some(r)) => out.push_str(&format!(
                    "# spectral_ratio={} reference_queries={}\n",
                    fmt_float(a),
                    fmt_float(r)
                )),
                _ => out.push_str("# spectral_ratio=degenerate\n"),
            }
            match &split0 {
                Some(c) => out.push_str(&format!(
                    "# split0 index={} split={} threshold={}\n",
                    c.index,
                    fmt_float(c.split),
                    fmt_float(c.threshold)
                )),
                None => out.push_str("# split0 unavailable (concentrated or degenerate)\n"),
            }
            let energies: Vec<String> = trace.energies.iter().map(|&e| fmt_float(e)).collect();
            out.push_str(&format!("# energy {}\n", energies.join(",")));
            out
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "class": args.class.describe(),
                "concepts": cc.len(),
                "bits": cc.n_bits(),
                "stop_mass": args.stop_mass,
                "transcripts": transcripts,
                "energy": trace.energies,
                "summary": {
                    "max_queries": max_queries,
                    "mean_queries": mean_queries,
                    "correct_rate": correct_rate,
                    "spectral_ratio": ratio,
                    "reference_queries": reference,
                    "split0": split0.as_ref().map(|c| serde_json::json!({
                        "index": c.index,
                        "split": c.split,
                        "threshold": c.threshold,
                    })),
                },
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
            text.push('\n');
            text
        }
    };
    write_output(&args.out, &content)?;
    Ok(())
}
