use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Floats are emitted with 12 significant digits so reruns are byte-stable;
/// exact rationals are emitted as p/q strings where they occur.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Writes to the given path, or stdout when none was given.
pub fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

/// Derives one run seed from a master seed and a trial index, and splits it
/// into independent sub-seeds. SplitMix64 keeps the streams unrelated even
/// for adjacent trial indices.
pub fn derive_run_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master.wrapping_add(trial.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Parses "42" or a comma-separated list "1,2,3" of master seeds.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let seeds: Result<Vec<u64>, _> = text.split(',').map(|s| s.trim().parse::<u64>()).collect();
    match seeds {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!("bad seed list {text:?}"))),
    }
}

/// Runs `total` independent jobs on `jobs` workers and returns the results in
/// index order regardless of scheduling.
pub fn run_indexed<T: Send>(
    total: usize,
    jobs: usize,
    work: impl Fn(usize) -> T + Sync,
) -> Vec<T> {
    let jobs = jobs.max(1).min(total.max(1));
    if jobs <= 1 {
        return (0..total).map(work).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let (tx, rx) = std::sync::mpsc::channel::<(usize, T)>();
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let next = &next;
            let work = &work;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= total {
                    break;
                }
                if tx.send((idx, work(idx))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut slots: Vec<Option<T>> = (0..total).map(|_| None).collect();
    for (idx, value) in rx {
        slots[idx] = Some(value);
    }
    slots.into_iter().map(|s| s.expect("worker completed")).collect()
}

pub fn percentile(sorted: &[u64], p: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((sorted.len() as f64 - 1.0) * p).round() as usize;
    sorted[rank.min(sorted.len() - 1)]
}
