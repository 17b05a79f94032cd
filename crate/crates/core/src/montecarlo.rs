//! Seeded Monte-Carlo estimates over independent samples.
//!
//! Trial `t` draws from [`trial_rng`]`(seed_base, t)`, so trials can run in
//! any order or in parallel. Aggregation always sums per-trial values in
//! trial order, which keeps results bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::PowerLawParams;
use crate::random::{a_values, neighbor_stats, sample_plg_with, simplify, trial_rng};

/// Mean and standard error of the mean. `stderr` is `None` for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub stderr: Option<f64>,
    pub trials: usize,
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Summary {
        let n = values.len();
        if n == 0 {
            return Summary {
                mean: 0.0,
                stderr: None,
                trials: 0,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = (n > 1).then(|| {
            let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n as f64 - 1.0)).sqrt() / (n as f64).sqrt()
        });
        Summary {
            mean,
            stderr,
            trials: n,
        }
    }

    /// `mean - k * stderr`, treating a missing stderr as zero.
    pub fn lower(&self, k: f64) -> f64 {
        self.mean - k * self.stderr.unwrap_or(0.0)
    }
}

/// Measurements from one sampled graph (after simplification).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub m1: f64,
    pub a1: f64,
    pub a2: f64,
    pub n1_total: f64,
    pub n2_total: f64,
}

pub fn trial_stats(params: &PowerLawParams, seed_base: u64, trial: u64, node_cap: u64) -> Result<TrialStats> {
    let mut rng = trial_rng(seed_base, trial);
    let g = simplify(&sample_plg_with(params, node_cap, &mut rng)?);
    let stats = neighbor_stats(&g);
    let (a1, a2) = a_values(&g, &stats);
    Ok(TrialStats {
        m1: stats.m1 as f64,
        a1,
        a2,
        n1_total: stats.n1_total() as f64,
        n2_total: stats.n2_total() as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub m1: Summary,
    pub a1: Summary,
    pub a2: Summary,
    pub n1_total: Summary,
    pub n2_total: Summary,
}

impl StatsReport {
    /// Aggregates trials given in trial order.
    pub fn from_trials(trials: &[TrialStats]) -> StatsReport {
        let pick =
            |f: fn(&TrialStats) -> f64| Summary::from_values(&trials.iter().map(f).collect::<Vec<_>>());
        StatsReport {
            m1: pick(|t| t.m1),
            a1: pick(|t| t.a1),
            a2: pick(|t| t.a2),
            n1_total: pick(|t| t.n1_total),
            n2_total: pick(|t| t.n2_total),
        }
    }
}

pub fn run_stats(
    params: &PowerLawParams,
    trials: usize,
    seed_base: u64,
    node_cap: u64,
) -> Result<StatsReport> {
    let per_trial = (0..trials as u64)
        .map(|t| trial_stats(params, seed_base, t, node_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(StatsReport::from_trials(&per_trial))
}

/// Monte-Carlo `(A1, A2)` estimates.
pub fn estimate_a_values(
    params: &PowerLawParams,
    trials: usize,
    seed_base: u64,
    node_cap: u64,
) -> Result<(Summary, Summary)> {
    let report = run_stats(params, trials.max(1), seed_base, node_cap)?;
    Ok((report.a1, report.a2))
}
