use std::path::PathBuf;

use clap::Args;
use fsparse_core::fourier::random_sparse_function;
use fsparse_core::learner::{learn, stall_limit, LearnerConfig, Phase2Mode, RunRecord};
use fsparse_core::oracle::ExampleOracle;

use crate::error::CliError;
use crate::output::{
    derive_run_seed, fmt_float, parse_seeds, percentile, run_indexed, splitmix64, write_output,
    OutputFormat,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Phase2Arg {
    Estimate,
    Coupon,
}

impl From<Phase2Arg> for Phase2Mode {
    fn from(value: Phase2Arg) -> Self {
        match value {
            Phase2Arg::Estimate => Phase2Mode::EstimateRound,
            Phase2Arg::Coupon => Phase2Mode::CouponCollector,
        }
    }
}

/// Run the two-phase learner on seeded planted instances.
#[derive(Debug, Args)]
pub struct LearnSparseArgs {
    /// Ambient number of variables.
    #[arg(long)]
    pub n: usize,
    /// Sparsity bound of the planted functions and of the learner.
    #[arg(long)]
    pub k: usize,
    /// Fourier dimension of the planted functions (at most min(n, 4)).
    #[arg(long = "r-core")]
    pub r_core: usize,
    /// Number of runs per master seed.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Master seed or comma-separated list of master seeds.
    #[arg(long, env = "FSPARSE_SEED", default_value = "1")]
    pub seed: String,
    /// Overall failure budget in (0,1).
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub delta: f64,
    /// Phase-2 strategy.
    #[arg(long = "phase2", value_enum, default_value = "estimate")]
    pub phase2: Phase2Arg,
    /// Stall-rule multiplier for the phase-1 stopping rule.
    #[arg(long = "stall-factor", default_value_t = 3.0)]
    pub stall_factor: f64,
    /// Worker threads; rows are merged in seed order either way.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

pub fn run(args: &LearnSparseArgs) -> Result<(), CliError> {
    let seeds = parse_seeds(&args.seed)?;
    let mut cfg = LearnerConfig::new(args.k);
    cfg.delta = args.delta;
    cfg.phase2_mode = args.phase2.into();
    cfg.stall_factor = args.stall_factor;
    if !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(CliError::Usage(format!("--delta {} not in (0,1)", args.delta)));
    }
    if args.n == 0 || args.n > 20 {
        return Err(CliError::Usage(format!("--n {} not in 1..=20", args.n)));
    }
    // Probe the generator once: the candidate set depends only on (k, r_core),
    // so a satisfiable probe makes every trial satisfiable.
    random_sparse_function(args.n, args.k, args.r_core, 0)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let plan: Vec<u64> = seeds
        .iter()
        .flat_map(|&s| (0..args.trials).map(move |t| derive_run_seed(s, t)))
        .collect();
    let records = run_indexed(plan.len(), args.jobs, |idx| {
        run_one(plan[idx], args, &cfg)
    });

    let content = match args.format {
        OutputFormat::Csv => render_csv(&records, args, &cfg),
        OutputFormat::Json => render_json(&records, args, &cfg),
    };
    write_output(&args.out, &content)?;
    Ok(())
}

fn run_one(run_seed: u64, args: &LearnSparseArgs, cfg: &LearnerConfig) -> RunRecord {
    let instance_seed = splitmix64(run_seed ^ 0x01);
    let oracle_seed = splitmix64(run_seed ^ 0x02);
    let mode = cfg.phase2_mode.name().to_string();
    let planted = random_sparse_function(args.n, args.k, args.r_core, instance_seed)
        .expect("validated parameters");
    let r_true = planted.fourier_span().dim();
    let mut record = RunRecord {
        seed: run_seed,
        n: args.n,
        k: args.k,
        r_true,
        r_found: 0,
        phase1_quantum_examples: 0,
        phase2_classical_examples: 0,
        exact_match: false,
        mode,
    };
    let mut oracle = match ExampleOracle::new(planted.clone(), oracle_seed) {
        Ok(o) => o,
        Err(_) => return record,
    };
    match learn(&mut oracle, cfg) {
        Ok(result) => {
            record.r_found = result.span.dim();
            record.phase1_quantum_examples = result.log.quantum_examples_used;
            record.phase2_classical_examples = result.log.classical_examples_used;
            record.exact_match = result.success_selfreport && result.spectrum == planted;
        }
        Err(_) => {
            record.phase1_quantum_examples = oracle.log().quantum_examples_used;
            record.phase2_classical_examples = oracle.log().classical_examples_used;
        }
    }
    record
}

struct Summary {
    runs: usize,
    exact: usize,
    mean_phase1: f64,
    p50_phase1: u64,
    p90_phase1: u64,
    mean_phase2: f64,
    p50_phase2: u64,
    p90_phase2: u64,
    reference_phase1: f64,
    stall_allowance: f64,
}

fn summarize(records: &[RunRecord], args: &LearnSparseArgs, cfg: &LearnerConfig) -> Summary {
    let runs = records.len();
    let exact = records.iter().filter(|r| r.exact_match).count();
    let mut p1: Vec<u64> = records.iter().map(|r| r.phase1_quantum_examples).collect();
    let mut p2: Vec<u64> = records.iter().map(|r| r.phase2_classical_examples).collect();
    p1.sort_unstable();
    p2.sort_unstable();
    let kf = args.k.max(2) as f64;
    let r = args.r_core.max(1) as f64;
    Summary {
        runs,
        exact,
        mean_phase1: p1.iter().sum::<u64>() as f64 / runs.max(1) as f64,
        p50_phase1: percentile(&p1, 0.5),
        p90_phase1: percentile(&p1, 0.9),
        mean_phase2: p2.iter().sum::<u64>() as f64 / runs.max(1) as f64,
        p50_phase2: percentile(&p2, 0.5),
        p90_phase2: percentile(&p2, 0.9),
        reference_phase1: 4.0 * kf * kf.log2() * (r.ln() + 1.0),
        stall_allowance: 2.0 * stall_limit(cfg, args.n) as f64,
    }
}

fn render_csv(records: &[RunRecord], args: &LearnSparseArgs, cfg: &LearnerConfig) -> String {
    let mut out = String::new();
    out.push_str(
        "seed,n,k,r_true,r_found,phase1_quantum_examples,phase2_classical_examples,exact_match,mode\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.n,
            r.k,
            r.r_true,
            r.r_found,
            r.phase1_quantum_examples,
            r.phase2_classical_examples,
            r.exact_match,
            r.mode
        ));
    }
    let s = summarize(records, args, cfg);
    out.push_str(&format!(
        "# summary runs={} exact={} exact_rate={}\n",
        s.runs,
        s.exact,
        fmt_float(s.exact as f64 / s.runs.max(1) as f64)
    ));
    out.push_str(&format!(
        "# phase1_quantum mean={} p50={} p90={} reference={} stall_allowance={}\n",
        fmt_float(s.mean_phase1),
        s.p50_phase1,
        s.p90_phase1,
        fmt_float(s.reference_phase1),
        fmt_float(s.stall_allowance)
    ));
    out.push_str(&format!(
        "# phase2_classical mean={} p50={} p90={}\n",
        fmt_float(s.mean_phase2),
        s.p50_phase2,
        s.p90_phase2
    ));
    out
}

fn render_json(records: &[RunRecord], args: &LearnSparseArgs, cfg: &LearnerConfig) -> String {
    let s = summarize(records, args, cfg);
    let summary = serde_json::json!({
        "runs": s.runs,
        "exact": s.exact,
        "exact_rate": s.exact as f64 / s.runs.max(1) as f64,
        "phase1_quantum": {
            "mean": s.mean_phase1,
            "p50": s.p50_phase1,
            "p90": s.p90_phase1,
            "reference": s.reference_phase1,
            "stall_allowance": s.stall_allowance,
        },
        "phase2_classical": {
            "mean": s.mean_phase2,
            "p50": s.p50_phase2,
            "p90": s.p90_phase2,
        },
    });
    let doc = serde_json::json!({ "runs": records, "summary": summary });
    let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
    text.push('\n');
    text
}
