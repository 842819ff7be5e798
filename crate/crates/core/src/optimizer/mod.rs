//! Grid search over template parameters.
//!
//! Pipeline: enumerate the grid, keep one representative per distinct gap
//! list, screen each with the sequential filter, evaluate survivors with a
//! full trial run, rank by mean cost (then fewer gaps, then canonical key).
//!
//! Every candidate draws permutations from streams derived from the run seed
//! and its canonical key, so results do not depend on evaluation order or
//! thread count. With `paired` set, all candidates share the same streams.

mod grid;
mod sprt;

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::trial_permutation;
use crate::engine::{shellsort, time_shellsort, AccountingModel, SortError};
use crate::gaps::{GapError, GapSequence};
use crate::rng::derive_seed;
use crate::stats::{CostKind, TrialStats};

pub use grid::{Axis, Family, GridError, GridSpec, TemplateParams};
pub use sprt::{sprt_run, Decision, SprtConfig, SprtOutcome};

/// Minimum full-evaluation trials when the cost is wall time.
pub const MIN_TIME_TRIALS: usize = 30;

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("invalid filter configuration: {0}")]
    Sprt(String),
    #[error("checkpoint does not match this search: {0}")]
    CheckpointMismatch(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Gap(#[from] GapError),
}

/// Counts from the dedupe stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterStats {
    pub tuples: u64,
    pub degenerate: u64,
    /// Valid sequences with fewer than two gaps at `n > 4`.
    pub too_short: u64,
    pub unique: u64,
    pub processed: u64,
    pub rejected: u64,
    pub accepted: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub params: TemplateParams,
    pub gaps: GapSequence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deduped {
    pub candidates: IndexMap<String, Candidate>,
    pub stats: FilterStats,
}

/// One representative (the first seen) per distinct gap list.
pub fn dedupe(tuples: impl IntoIterator<Item = TemplateParams>, n: usize) -> Deduped {
    let mut stats = FilterStats::default();
    let mut candidates = IndexMap::new();
    for params in tuples {
        stats.tuples += 1;
        let Ok(gaps) = params.generate(n) else {
            stats.degenerate += 1;
            continue;
        };
        if n > 4 && gaps.len() < 2 {
            stats.too_short += 1;
            continue;
        }
        candidates
            .entry(gaps.canonical_key())
            .or_insert(Candidate { params, gaps });
    }
    stats.unique = candidates.len() as u64;
    Deduped { candidates, stats }
}

/// One cost sample for trial `t` of `stream`.
fn sample(gaps: &GapSequence, n: usize, cost: CostKind, stream: u64, t: usize) -> f64 {
    let mut a = trial_permutation(stream, n, t);
    if cost.is_time() {
        return time_shellsort(&mut a, gaps).expect("gaps fit n").as_nanos() as f64;
    }
    let m = shellsort(&mut a, gaps, AccountingModel::CountOnly).expect("gaps fit n");
    cost.of(&m).expect("counter costs are always recorded")
}

/// Mean and sample sd of `cost` over `trials` Fisher-Yates permutations of
/// `1..=n`. Deterministic in `seed`; time costs run serially.
pub fn evaluate(
    gaps: &GapSequence,
    n: usize,
    trials: usize,
    cost: CostKind,
    seed: u64,
) -> Result<TrialStats, OptimizerError> {
    if !gaps.fits(n) {
        return Err(SortError::InvalidGap {
            gap: gaps.max_gap(),
            len: n,
        }
        .into());
    }
    let stream = derive_seed(seed, "evaluate");
    let xs: Vec<f64> = if cost.is_time() {
        (0..trials)
            .map(|t| sample(gaps, n, cost, stream, t))
            .collect()
    } else {
        (0..trials)
            .into_par_iter()
            .map(|t| sample(gaps, n, cost, stream, t))
            .collect()
    };
    Ok(TrialStats::from_samples(&xs, cost))
}

/// Screens `gaps` with the sequential filter.
pub fn sprt_filter(
    gaps: &GapSequence,
    n: usize,
    cfg: &SprtConfig,
    cost: CostKind,
    seed: u64,
) -> SprtOutcome {
    let stream = derive_seed(seed, "screen");
    sprt_run(cfg, |t| sample(gaps, n, cost, stream, t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub rank: usize,
    pub parameters: TemplateParams,
    pub key: String,
    pub stats: TrialStats,
}

impl SearchResult {
    pub fn gap_count(&self) -> usize {
        self.key.split(',').count()
    }
}

/// Ascending mean, then fewer gaps, then canonical key.
fn rank(results: &mut [SearchResult]) {
    results.sort_by(|x, y| {
        x.stats
            .mean
            .total_cmp(&y.stats.mean)
            .then(x.gap_count().cmp(&y.gap_count()))
            .then_with(|| x.key.cmp(&y.key))
    });
    for (i, r) in results.iter_mut().enumerate() {
        r.rank = i + 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub spec: GridSpec,
    pub n: usize,
    pub cost: CostKind,
    pub sprt: SprtConfig,
    pub full_trials: usize,
    pub seed: u64,
    pub top_k: usize,
    #[serde(default)]
    pub paired: bool,
}

impl SearchConfig {
    fn validate(&self) -> Result<(), OptimizerError> {
        self.spec.validate()?;
        self.sprt.validate().map_err(OptimizerError::Sprt)?;
        if self.full_trials < 2 {
            return Err(OptimizerError::Sprt(
                "full_trials must be at least 2".into(),
            ));
        }
        Ok(())
    }

    fn full_trials(&self) -> usize {
        if self.cost.is_time() {
            self.full_trials.max(MIN_TIME_TRIALS)
        } else {
            self.full_trials
        }
    }

    fn candidate_seed(&self, key: &str) -> u64 {
        if self.paired {
            self.seed
        } else {
            derive_seed(self.seed, key)
        }
    }
}

/// Resumable search state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: SearchConfig,
    pub stats: FilterStats,
    /// Accepted candidates evaluated so far, unranked.
    pub accepted: Vec<SearchResult>,
}

impl Checkpoint {
    pub fn from_json(text: &str) -> Result<Self, OptimizerError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String, OptimizerError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self, OptimizerError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Writes atomically (temporary file, then rename).
    pub fn save(&self, path: &Path) -> Result<(), OptimizerError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json()?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Default)]
pub struct SearchOptions<'a> {
    /// Read on start (if present) and rewritten after every batch.
    pub checkpoint: Option<PathBuf>,
    /// Candidates per batch; 0 means 512.
    pub batch: usize,
    pub progress: Option<&'a (dyn Fn(&FilterStats) + Sync)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub results: Vec<SearchResult>,
    pub stats: FilterStats,
    /// Set when nothing passed the filter.
    pub diagnostic: Option<String>,
}

fn process(cfg: &SearchConfig, key: &str, cand: &Candidate) -> Option<SearchResult> {
    let seed = cfg.candidate_seed(key);
    let screen = sprt_filter(&cand.gaps, cfg.n, &cfg.sprt, cfg.cost, seed);
    if screen.decision == Decision::Reject {
        return None;
    }
    let stats = evaluate(&cand.gaps, cfg.n, cfg.full_trials(), cfg.cost, seed).expect("gaps fit n");
    Some(SearchResult {
        rank: 0,
        parameters: cand.params,
        key: key.to_string(),
        stats,
    })
}

/// Runs the full pipeline and returns the `top_k` best candidates.
pub fn grid_search(
    cfg: &SearchConfig,
    opts: &SearchOptions<'_>,
) -> Result<SearchOutcome, OptimizerError> {
    cfg.validate()?;
    let deduped = dedupe(cfg.spec.enumerate(), cfg.n);
    let mut state = Checkpoint {
        config: cfg.clone(),
        stats: deduped.stats,
        accepted: Vec::new(),
    };
    if let Some(path) = opts.checkpoint.as_deref().filter(|p| p.exists()) {
        let saved = Checkpoint::load(path)?;
        if saved.config != *cfg {
            return Err(OptimizerError::CheckpointMismatch(
                "search configuration differs".into(),
            ));
        }
        if saved.stats.unique != deduped.stats.unique || saved.stats.processed > saved.stats.unique
        {
            return Err(OptimizerError::CheckpointMismatch(
                "candidate count differs".into(),
            ));
        }
        state = saved;
    }

    let candidates: Vec<(&String, &Candidate)> = deduped.candidates.iter().collect();
    let batch = if opts.batch == 0 { 512 } else { opts.batch };
    let mut next = state.stats.processed as usize;
    while next < candidates.len() {
        let end = (next + batch).min(candidates.len());
        let chunk = &candidates[next..end];
        let found: Vec<Option<SearchResult>> = if cfg.cost.is_time() {
            chunk.iter().map(|(k, c)| process(cfg, k, c)).collect()
        } else {
            chunk.par_iter().map(|(k, c)| process(cfg, k, c)).collect()
        };
        for r in found {
            match r {
                Some(r) => {
                    state.accepted.push(r);
                    state.stats.accepted += 1;
                }
                None => state.stats.rejected += 1,
            }
        }
        state.stats.processed = end as u64;
        next = end;
        if let Some(path) = &opts.checkpoint {
            state.save(path)?;
        }
        if let Some(progress) = opts.progress {
            progress(&state.stats);
        }
    }

    let mut results = state.accepted;
    rank(&mut results);
    results.truncate(cfg.top_k.max(1));
    let diagnostic = results.is_empty().then(|| {
        format!(
            "no candidate passed the filter (threshold {:.2}); the threshold may be too strict",
            cfg.sprt.mean_threshold
        )
    });
    Ok(SearchOutcome {
        results,
        stats: state.stats,
        diagnostic,
    })
}

/// Re-grids each real parameter over `[v - radius, v + radius]` with
/// `points` values (integer parameters stay fixed) and returns the best
/// result. The input tuple is always evaluated, so the result is never worse
/// than the input under the same seed. `points == 1` or `radius == 0`
/// evaluates exactly the input.
pub fn local_refine(
    best: &TemplateParams,
    radius: f64,
    points: usize,
    cfg: &SearchConfig,
) -> Result<SearchResult, OptimizerError> {
    let family = best.family();
    let names = family.axis_names();
    let values = best.to_vec();
    let axes = names
        .iter()
        .zip(&values)
        .map(|(name, &v)| {
            let integer = *name == family.integer_axis();
            if integer || points <= 1 || radius == 0.0 {
                Axis::single(v, integer)
            } else {
                Axis::real(v - radius, v + radius, points)
            }
        })
        .collect();
    let spec = GridSpec { family, axes };
    let mut input = dedupe([*best], cfg.n);
    let Some((key, cand)) = input.candidates.pop() else {
        return Err(best.generate(cfg.n).err().map_or_else(
            || OptimizerError::Sprt("input tuple yields too few gaps".into()),
            OptimizerError::Gap,
        ));
    };
    let seed = cfg.candidate_seed(&key);
    let base = SearchResult {
        rank: 1,
        parameters: cand.params,
        key: key.clone(),
        stats: evaluate(&cand.gaps, cfg.n, cfg.full_trials(), cfg.cost, seed)?,
    };
    let sub = SearchConfig {
        spec,
        top_k: 1,
        ..cfg.clone()
    };
    let outcome = grid_search(&sub, &SearchOptions::default())?;
    let mut all: Vec<SearchResult> = outcome
        .results
        .into_iter()
        .filter(|r| r.key != key)
        .collect();
    all.push(base);
    rank(&mut all);
    Ok(all.swap_remove(0))
}

pub const RESULTS_HEADER: &str = "rank,parameters,gap_prefix,mean,sd,trials";

/// Results as CSV. Parameters are `;`-separated; the gap prefix lists up to
/// the first ten gaps.
pub fn results_csv(results: &[SearchResult]) -> Result<String, OptimizerError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER.split(','))?;
    for r in results {
        let prefix: Vec<&str> = r.key.split(',').take(10).collect();
        w.write_record([
            r.rank.to_string(),
            r.parameters.to_string(),
            prefix.join(" "),
            format!("{:.4}", r.stats.mean),
            format!("{:.4}", r.stats.sd),
            r.stats.trials.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}
