//! Parallel Monte-Carlo runs over a shared configuration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, RunResult};
use crate::scenario::ScenarioConfig;

/// Runs `runs` seeded simulations on `threads` workers (0 = rayon default).
/// Results are ordered by run index and do not depend on `threads`.
pub fn monte_carlo(cfg: &ScenarioConfig, runs: u64, threads: usize) -> Vec<RunResult> {
    let work = || {
        (0..runs)
            .into_par_iter()
            .map(|i| engine::run(cfg, i))
            .collect::<Vec<_>>()
    };
    if threads == 0 {
        return work();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Sample statistics of one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator), 0 for fewer than two samples.
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(Self {
            n,
            mean,
            std,
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[n - 1],
        })
    }
}

/// Linear-interpolation quantile of sorted data (R type 7).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summaries of the headline metrics across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs: usize,
    pub completed: usize,
    pub detection_time: Option<Summary>,
    pub mission_time: Option<Summary>,
    pub fer: Option<Summary>,
    pub objective: Option<Summary>,
}

impl Aggregate {
    pub fn of(results: &[RunResult]) -> Self {
        let col =
            |f: fn(&RunResult) -> f64| Summary::of(&results.iter().map(f).collect::<Vec<_>>());
        Self {
            runs: results.len(),
            completed: results.iter().filter(|r| r.complete).count(),
            detection_time: col(|r| r.detection_time),
            mission_time: col(|r| r.mission_time),
            fer: col(|r| r.fer),
            objective: col(|r| r.objective),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_type7() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.q3, 3.25);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_sample_has_zero_std() {
        let s = Summary::of(&[7.0]).unwrap();
        assert_eq!((s.mean, s.std, s.median), (7.0, 0.0, 7.0));
        assert!(Summary::of(&[]).is_none());
    }
}
