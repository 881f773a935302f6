//! Timing sweeps over generated instances, reported as CSV.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use anyhow::Context;
use serpar::{certify_ternary, generate, search_wheel, GenConfig, Mode, ReduceOptions};

use crate::sbm::mode_name;

pub const HEADER: &str = "mode,n,alpha,beta,gamma,delta,p,seed,phase,seconds,nnz,ns_per_nnz";

/// Times the full pipeline on one generated instance and returns one CSV
/// line per phase.
pub fn run_one(config: &GenConfig, options: &ReduceOptions) -> anyhow::Result<Vec<String>> {
    let matrix = generate(config).with_context(|| format!("invalid configuration {config:?}"))?;
    let phases: Vec<(&str, Duration)> = match config.mode {
        Mode::Binary => {
            let stats = search_wheel(&matrix, options)?.stats;
            vec![("reduce", stats.reduce_time), ("wheel-search", stats.search_time)]
        }
        Mode::Ternary => {
            let stats = certify_ternary(&matrix, options)?.stats;
            vec![
                ("reduce", stats.reduce_time),
                ("wheel-search", stats.wheel_search_time),
                ("n2-search", stats.n2_search_time),
            ]
        }
    };
    let nnz = matrix.nnz();
    Ok(phases
        .into_iter()
        .map(|(phase, time)| {
            let seconds = time.as_secs_f64();
            let per_nnz = if nnz == 0 { 0.0 } else { seconds * 1e9 / nnz as f64 };
            format!(
                "{},{},{},{},{},{},{},{},{phase},{seconds:.6},{nnz},{per_nnz:.2}",
                mode_name(config.mode),
                config.n,
                config.alpha,
                config.beta,
                config.gamma,
                config.delta,
                config.p,
                config.seed
            )
        })
        .collect())
}

/// Runs every configuration on up to `jobs` threads and returns the CSV
/// lines in input order.
pub fn run_all(configs: &[GenConfig], options: &ReduceOptions, jobs: usize) -> anyhow::Result<Vec<String>> {
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<anyhow::Result<Vec<String>>>>> = configs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(configs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(config) = configs.get(i) else { break };
                *results[i].lock().unwrap() = Some(run_one(config, options));
            });
        }
    });
    let mut lines = Vec::new();
    for slot in results {
        lines.extend(slot.into_inner().unwrap().expect("every configuration ran")?);
    }
    Ok(lines)
}
