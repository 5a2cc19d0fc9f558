use rayon::prelude::*;
use serde::Serialize;

use super::{run, RunConfig};
use crate::error::Result;

/// Mean and standard error of welfare over the runs of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub usw_mean: f64,
    pub usw_stderr: f64,
    pub nsw_mean: f64,
    pub nsw_stderr: f64,
    pub converged_runs: usize,
    pub runs: usize,
}

/// Per-configuration summaries plus the mean and standard error of the
/// per-configuration means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub per_config: Vec<ConfigSummary>,
    pub usw_mean: f64,
    pub usw_stderr: f64,
    pub nsw_mean: f64,
    pub nsw_stderr: f64,
}

/// Seed of run `run` of configuration `config` in a batch seeded by `base`.
pub fn derive_seed(base: u64, config: usize, run: usize) -> u64 {
    let mut x = splitmix(base);
    x = splitmix(x ^ config as u64);
    splitmix(x ^ ((run as u64) << 32 | 0x5bd1))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs every configuration `runs` times with seeds derived from `seed_base`.
///
/// Runs execute on the current rayon pool; the result does not depend on the
/// pool size.
pub fn run_batch(configs: &[RunConfig], runs: usize, seed_base: u64) -> Result<BatchSummary> {
    let runs = runs.max(1);
    let jobs: Vec<(usize, usize)> = (0..configs.len()).flat_map(|c| (0..runs).map(move |r| (c, r))).collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(c, r)| {
            let cfg = RunConfig {
                seed: derive_seed(seed_base, c, r),
                ..configs[c].clone()
            };
            run(&cfg).map(|res| (res.usw, res.nsw, res.converged))
        })
        .collect::<Result<Vec<_>>>()?;
    let per_config: Vec<ConfigSummary> = outcomes
        .chunks(runs)
        .map(|chunk| {
            let usw: Vec<f64> = chunk.iter().map(|o| o.0).collect();
            let nsw: Vec<f64> = chunk.iter().map(|o| o.1).collect();
            let (usw_mean, usw_stderr) = mean_stderr(&usw);
            let (nsw_mean, nsw_stderr) = mean_stderr(&nsw);
            ConfigSummary {
                usw_mean,
                usw_stderr,
                nsw_mean,
                nsw_stderr,
                converged_runs: chunk.iter().filter(|o| o.2).count(),
                runs,
            }
        })
        .collect();
    let (usw_mean, usw_stderr) = mean_stderr(&per_config.iter().map(|c| c.usw_mean).collect::<Vec<_>>());
    let (nsw_mean, nsw_stderr) = mean_stderr(&per_config.iter().map(|c| c.nsw_mean).collect::<Vec<_>>());
    Ok(BatchSummary {
        per_config,
        usw_mean,
        usw_stderr,
        nsw_mean,
        nsw_stderr,
    })
}

/// Sample mean and standard error (zero for a single value).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
