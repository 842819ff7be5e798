//! Cost kinds and per-trial summary statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use crate::engine::SortMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    Comparisons,
    Exchanges,
    ExchangeOps,
    /// Wall time in nanoseconds.
    Time,
}

impl CostKind {
    pub const COUNTERS: [CostKind; 3] = [
        CostKind::Comparisons,
        CostKind::Exchanges,
        CostKind::ExchangeOps,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CostKind::Comparisons => "comparisons",
            CostKind::Exchanges => "exchanges",
            CostKind::ExchangeOps => "exchange_ops",
            CostKind::Time => "time_ns",
        }
    }

    /// Counter value for this cost; `None` for time without a recorded time.
    pub fn of(&self, m: &SortMetrics) -> Option<f64> {
        match self {
            CostKind::Comparisons => Some(m.comparisons as f64),
            CostKind::Exchanges => Some(m.exchanges as f64),
            CostKind::ExchangeOps => Some(m.exchange_ops as f64),
            CostKind::Time => m.wall_time_ns.map(|t| t as f64),
        }
    }

    pub fn is_time(&self) -> bool {
        *self == CostKind::Time
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "co" | "comparisons" => Ok(CostKind::Comparisons),
            "ex" | "exchanges" => Ok(CostKind::Exchanges),
            "exop" | "exchange_ops" | "exchange-ops" => Ok(CostKind::ExchangeOps),
            "time" | "time_ns" => Ok(CostKind::Time),
            other => Err(format!(
                "unknown cost `{other}` (expected co, ex, exop or time)"
            )),
        }
    }
}

/// Mean and sample standard deviation of one cost over a set of trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub mean: f64,
    pub sd: f64,
    pub trials: usize,
    pub cost_kind: CostKind,
}

impl TrialStats {
    /// Summary of `samples`. The sd of fewer than two samples is 0.
    pub fn from_samples(samples: &[f64], cost_kind: CostKind) -> Self {
        let (mean, sd) = mean_sd(samples);
        Self {
            mean,
            sd,
            trials: samples.len(),
            cost_kind,
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.sd / (self.trials as f64).sqrt()
    }
}

pub fn mean_sd(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.mean();
    let sd = if samples.len() < 2 {
        0.0
    } else {
        samples.std_dev()
    };
    (mean, sd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_sd() {
        let (m, s) = mean_sd(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_sd(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn parse_costs() {
        assert_eq!("CO".parse::<CostKind>(), Ok(CostKind::Comparisons));
        assert_eq!("exop".parse::<CostKind>(), Ok(CostKind::ExchangeOps));
        assert!("swaps".parse::<CostKind>().is_err());
    }
}
