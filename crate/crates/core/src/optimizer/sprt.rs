//! Sequential low-pass filter on a candidate's mean cost.
//!
//! Trials are drawn one at a time. From `min_trials` on, a one-sided normal
//! band of half-width `z * sqrt(variance_upper_bound / t)` around the running
//! mean is compared with the threshold: entirely below accepts, entirely above
//! rejects. At `max_trials` the point estimate decides.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::stats::TrialStats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprtConfig {
    pub mean_threshold: f64,
    pub variance_upper_bound: f64,
    pub confidence: f64,
    pub min_trials: usize,
    pub max_trials: usize,
}

impl SprtConfig {
    pub const DEFAULT_MIN_TRIALS: usize = 5;
    pub const DEFAULT_MAX_TRIALS: usize = 100;

    /// Threshold `1.02 * baseline mean`, variance bound `(1.5 * baseline sd)^2`.
    pub fn from_baseline(baseline: &TrialStats) -> Self {
        Self {
            mean_threshold: 1.02 * baseline.mean,
            variance_upper_bound: (1.5 * baseline.sd).powi(2),
            confidence: 0.95,
            min_trials: Self::DEFAULT_MIN_TRIALS,
            max_trials: Self::DEFAULT_MAX_TRIALS,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err("confidence must lie in (0, 1)".into());
        }
        if self.min_trials == 0 || self.min_trials > self.max_trials {
            return Err("need 1 <= min_trials <= max_trials".into());
        }
        if self.variance_upper_bound.is_nan() || self.variance_upper_bound < 0.0 {
            return Err("variance bound must be non-negative".into());
        }
        if self.mean_threshold.is_nan() {
            return Err("mean threshold must be a number".into());
        }
        Ok(())
    }

    fn z(&self) -> f64 {
        Normal::standard().inverse_cdf(self.confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SprtOutcome {
    pub decision: Decision,
    pub trials_used: usize,
    pub mean: f64,
}

/// Runs the filter over `sample(t)` for `t = 0, 1, ...`.
pub fn sprt_run(cfg: &SprtConfig, mut sample: impl FnMut(usize) -> f64) -> SprtOutcome {
    let z = cfg.z();
    let mut sum = 0.0;
    for t in 0..cfg.max_trials {
        sum += sample(t);
        let used = t + 1;
        let mean = sum / used as f64;
        if used < cfg.min_trials {
            continue;
        }
        let half = z * (cfg.variance_upper_bound / used as f64).sqrt();
        let decision = if mean + half < cfg.mean_threshold {
            Some(Decision::Accept)
        } else if mean - half > cfg.mean_threshold {
            Some(Decision::Reject)
        } else if used == cfg.max_trials {
            Some(if mean < cfg.mean_threshold {
                Decision::Accept
            } else {
                Decision::Reject
            })
        } else {
            None
        };
        if let Some(decision) = decision {
            return SprtOutcome {
                decision,
                trials_used: used,
                mean,
            };
        }
    }
    unreachable!("the last trial always decides")
}
