//! Experiment harness: seeded trials, aggregation and report output.
//!
//! Counting runs are parallel over trials. Each trial's permutation comes
//! from its own RNG stream, so parallel and serial runs agree exactly. In
//! paired mode every sequence at a given `n` sees the same permutations.
//! Timing runs are serial and interleave sequences trial by trial.

mod tables;

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{sort_counted, sort_timed};
use crate::engine::Key;
use crate::gaps::catalog::{resolve, CatalogError, Generator, Strategy};
use crate::gaps::{GapError, GapSequence};
use crate::rng::{derive_seed, random_permutation, trial_rng};
use crate::stats::{CostKind, TrialStats};

pub use tables::{reproduce_table, timing_order_holds, Reference, ReproRow, TableId, TableReport};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{sequence} at n = {n}: {source}")]
    Gap {
        sequence: String,
        n: usize,
        source: GapError,
    },
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("no row for baseline `{0}`")]
    MissingBaseline(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown format `{other}` (expected csv, markdown or json)"
            )),
        }
    }
}

fn default_trials() -> usize {
    1000
}

fn default_costs() -> Vec<CostKind> {
    vec![CostKind::Comparisons]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sequences: Vec<String>,
    pub sizes: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_costs")]
    pub costs: Vec<CostKind>,
    #[serde(default)]
    pub paired: bool,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(sequences: Vec<String>, sizes: Vec<usize>) -> Self {
        Self {
            sequences,
            sizes,
            trials: default_trials(),
            seed: 0,
            costs: default_costs(),
            paired: false,
            format: OutputFormat::Csv,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.sequences.is_empty() {
            return bad("at least one sequence is required");
        }
        if self.sizes.is_empty() {
            return bad("at least one size is required");
        }
        if self.sizes.contains(&0) {
            return bad("sizes must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.costs.is_empty() {
            return bad("at least one cost kind is required");
        }
        for name in &self.sequences {
            resolve(name)?;
        }
        Ok(())
    }
}

/// Aggregated results for one (sequence, n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub sequence: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub stats: Vec<TrialStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ReportRow {
    pub fn stat(&self, cost: CostKind) -> Option<&TrialStats> {
        self.stats.iter().find(|s| s.cost_kind == cost)
    }
}

/// RNG stream label for one (sequence, n). Paired runs share it across
/// sequences.
fn stream_seed(seed: u64, sequence: &str, n: usize, paired: bool) -> u64 {
    if paired {
        derive_seed(seed, &format!("n={n}"))
    } else {
        derive_seed(seed, &format!("{sequence}/n={n}"))
    }
}

/// The permutation for trial `trial` of the stream `stream`.
pub fn trial_permutation(stream: u64, n: usize, trial: usize) -> Vec<Key> {
    random_permutation(n, &mut trial_rng(stream, trial as u64))
}

fn truncation_warning(strategy: &Strategy, n: usize) -> Option<String> {
    if let Generator::Ciura(v) = strategy.generator {
        let max = *v.base().last().unwrap();
        if max >= n {
            return Some(format!(
                "fixed list truncated to gaps below {n} (largest listed gap {max})"
            ));
        }
    }
    None
}

struct Prepared {
    strategy: Strategy,
    gaps: GapSequence,
    warnings: Vec<String>,
}

fn prepare(name: &str, n: usize) -> Result<Prepared, BenchError> {
    let strategy = resolve(name)?;
    let gaps = strategy.gaps_for(n).map_err(|source| BenchError::Gap {
        sequence: name.to_string(),
        n,
        source,
    })?;
    let mut warnings = strategy.warnings();
    warnings.extend(truncation_warning(&strategy, n));
    Ok(Prepared {
        strategy,
        gaps,
        warnings,
    })
}

/// Counter samples for each trial, in trial order.
fn count_trials(p: &Prepared, n: usize, trials: usize, stream: u64) -> Vec<crate::SortMetrics> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut a = trial_permutation(stream, n, t);
            sort_counted(p.strategy.final_pass, &p.gaps, &mut a).expect("gaps fit n")
        })
        .collect()
}

/// Runs every (sequence, n) of `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, BenchError> {
    cfg.validate()?;
    let counters: Vec<CostKind> = cfg.costs.iter().copied().filter(|c| !c.is_time()).collect();
    let timed = cfg.costs.contains(&CostKind::Time);
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let prepared: Vec<Prepared> = cfg
            .sequences
            .iter()
            .map(|s| prepare(s, n))
            .collect::<Result<_, _>>()?;
        let streams: Vec<u64> = cfg
            .sequences
            .iter()
            .map(|s| stream_seed(cfg.seed, s, n, cfg.paired))
            .collect();
        let times = if timed {
            time_interleaved(&prepared, &streams, n, cfg.trials)
        } else {
            vec![Vec::new(); prepared.len()]
        };
        for (k, p) in prepared.iter().enumerate() {
            let mut stats = Vec::new();
            if !counters.is_empty() {
                let samples = count_trials(p, n, cfg.trials, streams[k]);
                for &c in &counters {
                    let xs: Vec<f64> = samples.iter().map(|m| c.of(m).unwrap()).collect();
                    stats.push(TrialStats::from_samples(&xs, c));
                }
            }
            if timed {
                stats.push(TrialStats::from_samples(&times[k], CostKind::Time));
            }
            stats.sort_by_key(|s| s.cost_kind);
            rows.push(ReportRow {
                sequence: cfg.sequences[k].clone(),
                n,
                trials: cfg.trials,
                seed: cfg.seed,
                stats,
                warnings: p.warnings.clone(),
            });
        }
    }
    Ok(rows)
}

/// Serial timing, sequences interleaved within each trial so that clock
/// drift and thermal effects spread evenly.
fn time_interleaved(
    prepared: &[Prepared],
    streams: &[u64],
    n: usize,
    trials: usize,
) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(trials); prepared.len()];
    for t in 0..trials {
        for (k, p) in prepared.iter().enumerate() {
            let mut a = trial_permutation(streams[k], n, t);
            let d = sort_timed(p.strategy.final_pass, &p.gaps, &mut a).expect("gaps fit n");
            out[k].push(d.as_nanos() as f64);
        }
    }
    out
}

pub const CSV_HEADER: &str = "sequence,n,cost,mean,sd,trials,seed";

pub fn to_csv(rows: &[ReportRow]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        for s in &r.stats {
            w.write_record([
                r.sequence.clone(),
                r.n.to_string(),
                s.cost_kind.label().to_string(),
                format!("{:.4}", s.mean),
                format!("{:.4}", s.sd),
                s.trials.to_string(),
                r.seed.to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}

pub fn to_markdown(rows: &[ReportRow]) -> String {
    let mut costs: Vec<CostKind> = rows
        .iter()
        .flat_map(|r| r.stats.iter().map(|s| s.cost_kind))
        .collect();
    costs.sort();
    costs.dedup();
    let mut out = String::from("| sequence | n |");
    for c in &costs {
        let _ = write!(out, " {} |", c.label());
    }
    out.push_str("\n|---|---|");
    for _ in &costs {
        out.push_str("---|");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "| {} | {} |", r.sequence, r.n);
        for c in &costs {
            match r.stat(*c) {
                Some(s) => {
                    let _ = write!(out, " {:.1} ± {:.1} |", s.mean, s.sd);
                }
                None => out.push_str(" |"),
            }
        }
        out.push('\n');
    }
    out
}

pub fn render(rows: &[ReportRow], format: OutputFormat) -> Result<String, BenchError> {
    Ok(match format {
        OutputFormat::Csv => to_csv(rows)?,
        OutputFormat::Markdown => to_markdown(rows),
        OutputFormat::Json => serde_json::to_string_pretty(rows)? + "\n",
    })
}

/// Per (sequence, n, cost): `mean - baseline mean` at the same n and cost.
/// Positive values mean the baseline is cheaper.
pub fn emit_plot_data(rows: &[ReportRow], baseline: &str) -> Result<String, BenchError> {
    if !rows.iter().any(|r| r.sequence == baseline) {
        return Err(BenchError::MissingBaseline(baseline.to_string()));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sequence", "n", "cost", "difference"])?;
    for r in rows {
        let Some(base) = rows.iter().find(|b| b.sequence == baseline && b.n == r.n) else {
            continue;
        };
        for s in &r.stats {
            if let Some(b) = base.stat(s.cost_kind) {
                w.write_record([
                    r.sequence.clone(),
                    r.n.to_string(),
                    s.cost_kind.label().to_string(),
                    format!("{:.4}", s.mean - b.mean),
                ])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}
