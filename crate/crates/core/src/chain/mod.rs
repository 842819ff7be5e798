//! Structure-aware final passes for arrays presorted with every Pratt-25
//! (respectively Pratt-34) gap larger than 1.
//!
//! After p- and q-sorting with coprime `p, q`, only inversion offsets outside
//! the semigroup `<p, q>` survive: `{1, 3}` for `<2, 5>` and `{1, 2, 5}` for
//! `<3, 4>`. Remaining inversions group into maximal chains whose shapes are
//! catalogued below, and the sorted order of a chain's interval is known from
//! its shape alone. The final pass detects each chain with a handful of
//! comparisons and rearranges the interval directly, paying one temporary per
//! permutation cycle instead of the shifts of an insertion pass.
//!
//! Chain shapes (`p` is the chain's first index):
//!
//! | kind | essential inversions                                   |
//! |------|--------------------------------------------------------|
//! | MC1  | `(p,p+1)`                                              |
//! | MC2  | `(p,p+2) (p,p+1)`                                      |
//! | MC3  | `(p,p+2) (p+1,p+2)`                                    |
//! | MC4  | `(p,p+1) (p+1,p+2)`                                    |
//! | MC5  | `(p,p+2) (p+1,p+3) (p+1,p+2)`                          |
//! | MC6  | `(p,p+3) (p+2,p+5) ... (p+2k-2,p+2k+1)`                |
//! | MC7  | 5-inversions at starts stepping by 3 or 4, plus at most one leading and one trailing boundary inversion |

mod lemmas;
mod pass25;
mod pass34;
mod presort;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use std::time::{Duration, Instant};

use crate::engine::{
    gapped_insertion_pass, is_k_sorted, is_sorted, presort, shellsort, time_shellsort,
    AccountingModel, Key, SortError, SortMetrics,
};
use crate::gaps::GapSequence;

pub use lemmas::{structural_violations, Rule, Violation};
pub use pass25::{final_pass_25, find_chain_25, fix_chain_25};
pub use pass34::{final_pass_34, find_chain_34, fix_chain_34};
pub use presort::{mean_presort_inversions, presort_pratt, remaining_offset};

/// Which final (gap-1) pass a strategy uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinalPass {
    #[default]
    Insertion,
    Chain25,
    Chain34,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("array is not {0}-sorted")]
    NotPresorted(usize),
    #[error("chain at [{lo}, {hi}] no longer matches the array")]
    StaleChain { lo: usize, hi: usize },
    #[error("interval [{lo}, {hi}] is not sorted after the fix")]
    FixFailed { lo: usize, hi: usize },
    #[error("array is not sorted after the final pass")]
    Unsorted,
    #[error("inversion pattern at index {at} matches no chain shape")]
    OutsideCatalog { at: usize },
    #[error("start index {start} out of range for length {len}")]
    OutOfRange { start: usize, len: usize },
}

/// `Trusted` skips structural checks (benchmark mode). `Verified` checks the
/// presort precondition, chain freshness and post-fix sortedness; the checks
/// never touch the metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    #[default]
    Trusted,
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChainKind {
    MC1,
    MC2,
    MC3,
    MC4,
    MC5,
    MC6,
    MC7,
}

impl ChainKind {
    pub const ALL: [ChainKind; 7] = [
        ChainKind::MC1,
        ChainKind::MC2,
        ChainKind::MC3,
        ChainKind::MC4,
        ChainKind::MC5,
        ChainKind::MC6,
        ChainKind::MC7,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An index pair `(i, j)` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Inversion {
    pub i: usize,
    pub j: usize,
}

impl Inversion {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        Self { i, j }
    }

    pub fn offset(&self) -> usize {
        self.j - self.i
    }

    pub fn holds(&self, array: &[Key]) -> bool {
        self.j < array.len() && array[self.i] > array[self.j]
    }
}

/// Leading boundary of an MC7 chain starting at `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeadCase {
    /// Neither `(i-1, i+1)` nor `(i+1, i+2)` is inverted.
    Plain,
    /// `(i-1, i+1)` is a 2-inversion; the interval starts at `i-1`.
    Left2,
    /// `(i+1, i+2)` is a 1-inversion.
    Inner1,
}

/// Trailing boundary of an MC7 chain whose last 5-inversion starts at `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailCase {
    /// Neither `(s+3, s+4)` nor `(s+4, s+6)` is inverted.
    Plain,
    /// `(s+3, s+4)` is a 1-inversion.
    Inner1,
    /// `(s+4, s+6)` is a 2-inversion; the interval ends at `s+6`.
    Right2,
}

/// A maximal chain of inversions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDescriptor {
    pub kind: ChainKind,
    /// Underlying interval, inclusive.
    pub lo: usize,
    pub hi: usize,
    pub essential: Vec<Inversion>,
    /// Number of 3-inversions (MC6) or 5-inversions (MC7); 1 for sporadic chains.
    pub length: usize,
    /// Boundary cases, MC7 only.
    pub ends: Option<(HeadCase, TailCase)>,
}

impl ChainDescriptor {
    pub(crate) fn sporadic(kind: ChainKind, p: usize) -> Self {
        let inv = Inversion::new;
        let (essential, hi) = match kind {
            ChainKind::MC1 => (vec![inv(p, p + 1)], p + 1),
            ChainKind::MC2 => (vec![inv(p, p + 2), inv(p, p + 1)], p + 2),
            ChainKind::MC3 => (vec![inv(p, p + 2), inv(p + 1, p + 2)], p + 2),
            ChainKind::MC4 => (vec![inv(p, p + 1), inv(p + 1, p + 2)], p + 2),
            ChainKind::MC5 => (
                vec![inv(p, p + 2), inv(p + 1, p + 3), inv(p + 1, p + 2)],
                p + 3,
            ),
            ChainKind::MC6 | ChainKind::MC7 => unreachable!("not a sporadic chain"),
        };
        Self {
            kind,
            lo: p,
            hi,
            essential,
            length: 1,
            ends: None,
        }
    }

    pub(crate) fn mc6(start: usize, k: usize) -> Self {
        let essential = (0..k)
            .map(|m| Inversion::new(start + 2 * m, start + 2 * m + 3))
            .collect();
        Self {
            kind: ChainKind::MC6,
            lo: start,
            hi: start + 2 * k + 1,
            essential,
            length: k,
            ends: None,
        }
    }

    pub(crate) fn mc7(starts: &[usize], head: HeadCase, tail: TailCase) -> Self {
        let first = starts[0];
        let last = *starts.last().unwrap();
        let mut essential = Vec::with_capacity(starts.len() + 2);
        match head {
            HeadCase::Left2 => essential.push(Inversion::new(first - 1, first + 1)),
            HeadCase::Inner1 => essential.push(Inversion::new(first + 1, first + 2)),
            HeadCase::Plain => {}
        }
        essential.extend(starts.iter().map(|&s| Inversion::new(s, s + 5)));
        match tail {
            TailCase::Inner1 => essential.push(Inversion::new(last + 3, last + 4)),
            TailCase::Right2 => essential.push(Inversion::new(last + 4, last + 6)),
            TailCase::Plain => {}
        }
        Self {
            kind: ChainKind::MC7,
            lo: if head == HeadCase::Left2 {
                first - 1
            } else {
                first
            },
            hi: if tail == TailCase::Right2 {
                last + 6
            } else {
                last + 5
            },
            essential,
            length: starts.len(),
            ends: Some((head, tail)),
        }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Starts of the 5-inversions of an MC7 chain.
    fn mc7_starts(&self) -> Vec<usize> {
        self.essential
            .iter()
            .filter(|e| e.offset() == 5)
            .map(|e| e.i)
            .collect()
    }

    /// Source indices of the interval's entries listed in ascending key order.
    ///
    /// The order follows from the chain shape alone; no keys are inspected.
    pub fn target_order(&self) -> Vec<usize> {
        let p = self.lo;
        match self.kind {
            ChainKind::MC1 => vec![p + 1, p],
            ChainKind::MC2 => vec![p + 1, p + 2, p],
            ChainKind::MC3 => vec![p + 2, p, p + 1],
            ChainKind::MC4 => vec![p + 2, p + 1, p],
            ChainKind::MC5 => vec![p + 2, p, p + 3, p + 1],
            ChainKind::MC6 => {
                // A(p+1) <= A(p+3) < A(p) <= A(p+5) < A(p+2) <= ... < A(p+2k-2) <= A(p+2k)
                let k = self.length;
                let mut order = Vec::with_capacity(2 * k + 2);
                order.push(p + 1);
                for m in 1..=k {
                    order.push(p + 2 * m + 1);
                    order.push(p + 2 * m - 2);
                }
                order.push(p + 2 * k);
                order
            }
            ChainKind::MC7 => {
                let (head, tail) = self.ends.expect("MC7 chains carry boundary cases");
                let starts = self.mc7_starts();
                let i = starts[0];
                let mut order = Vec::with_capacity(self.len());
                match head {
                    HeadCase::Plain => order.extend([i + 1, i + 2]),
                    HeadCase::Left2 => order.extend([i + 1, i - 1, i + 2]),
                    HeadCase::Inner1 => order.extend([i + 2, i + 1]),
                }
                order.extend([i + 5, i]);
                for w in starts.windows(2) {
                    let (s, t) = (w[0], w[1]);
                    if t - s == 3 {
                        order.extend([s + 4, t + 5, t]);
                    } else {
                        order.extend([s + 3, s + 6, t + 5, t]);
                    }
                }
                let s = *starts.last().unwrap();
                match tail {
                    TailCase::Plain => order.extend([s + 3, s + 4]),
                    TailCase::Inner1 => order.extend([s + 4, s + 3]),
                    TailCase::Right2 => order.extend([s + 3, s + 6, s + 4]),
                }
                order
            }
        }
    }
}

/// Per-pass tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassReport {
    /// Chains fixed, indexed by kind (MC1..MC7).
    pub chains: [u64; 7],
    /// Configurations outside the chain catalog, handled by plain insertion.
    pub fallbacks: u64,
}

impl PassReport {
    pub fn count(&self, kind: ChainKind) -> u64 {
        self.chains[kind.index()]
    }

    pub(crate) fn record(&mut self, kind: ChainKind) {
        self.chains[kind.index()] += 1;
    }

    pub fn total_chains(&self) -> u64 {
        self.chains.iter().sum()
    }

    pub fn merge(&mut self, other: &PassReport) {
        for (a, b) in self.chains.iter_mut().zip(other.chains) {
            *a += b;
        }
        self.fallbacks += other.fallbacks;
    }
}

/// Counted key comparisons against a shared metrics record.
pub(crate) struct Probe<'a> {
    pub array: &'a mut [Key],
    pub metrics: &'a mut SortMetrics,
}

impl<'a> Probe<'a> {
    pub fn new(array: &'a mut [Key], metrics: &'a mut SortMetrics) -> Self {
        Self { array, metrics }
    }

    /// Is `(i, j)` inverted? Out-of-range `j` is treated as `+inf` and costs
    /// nothing.
    #[inline]
    pub fn inv(&mut self, i: usize, j: usize) -> bool {
        if j >= self.array.len() {
            return false;
        }
        self.metrics.comparisons += 1;
        self.array[i] > self.array[j]
    }

    /// As [`Probe::inv`] with a possibly negative left index (`-inf`).
    #[inline]
    pub fn inv_left(&mut self, i: Option<usize>, j: usize) -> bool {
        match i {
            Some(i) => self.inv(i, j),
            None => false,
        }
    }
}

/// Rearranges `array[lo..lo + order.len()]` so that position `lo + t` receives
/// the entry previously at `order[t]`. Each nontrivial permutation cycle of
/// length `L` costs `L + 1` exchange operations (one temporary) and `L`
/// exchanges.
pub(crate) fn apply_order(
    array: &mut [Key],
    lo: usize,
    order: &[usize],
    metrics: &mut SortMetrics,
) {
    let len = order.len();
    let mut done = vec![false; len];
    for start in 0..len {
        if done[start] {
            continue;
        }
        done[start] = true;
        if order[start] == lo + start {
            continue;
        }
        let temp = array[lo + start];
        let mut cur = start;
        let mut cycle = 1u64;
        loop {
            let src = order[cur] - lo;
            if src == start {
                array[lo + cur] = temp;
                break;
            }
            array[lo + cur] = array[lo + src];
            done[src] = true;
            cur = src;
            cycle += 1;
        }
        metrics.exchanges += cycle;
        metrics.exchange_ops += cycle + 1;
    }
}

/// Applies a detected chain.
pub(crate) fn fix_chain(
    array: &mut [Key],
    chain: &ChainDescriptor,
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<(), ChainError> {
    let (lo, hi) = (chain.lo, chain.hi);
    if hi >= array.len() {
        return Err(ChainError::StaleChain { lo, hi });
    }
    if mode == CheckMode::Verified && !chain.essential.iter().all(|e| e.holds(array)) {
        return Err(ChainError::StaleChain { lo, hi });
    }
    let order = chain.target_order();
    debug_assert_eq!(order.len(), chain.len());
    apply_order(array, lo, &order, metrics);
    if mode == CheckMode::Verified && !is_sorted(&array[lo..=hi]) {
        return Err(ChainError::FixFailed { lo, hi });
    }
    Ok(())
}

/// Plain insertion of `array[from..]` into the sorted prefix `array[..from]`,
/// with standard accounting.
pub(crate) fn insertion_tail(array: &mut [Key], from: usize, metrics: &mut SortMetrics) {
    let mut shifts = 0u64;
    let mut displaced = 0u64;
    for i in from.max(1)..array.len() {
        let key = array[i];
        let mut j = i;
        while j >= 1 {
            metrics.comparisons += 1;
            if array[j - 1] > key {
                array[j] = array[j - 1];
                j -= 1;
            } else {
                break;
            }
        }
        if j != i {
            array[j] = key;
            shifts += (i - j) as u64;
            displaced += 1;
        }
    }
    metrics.exchanges += shifts;
    metrics.exchange_ops += shifts + 2 * displaced;
}

pub(crate) fn check_presorted(array: &[Key], p: usize, q: usize) -> Result<(), ChainError> {
    for k in [p, q] {
        if !is_k_sorted(array, k) {
            return Err(ChainError::NotPresorted(k));
        }
    }
    Ok(())
}

/// Runs the gap-1 pass selected by `final_pass`.
pub fn run_final_pass(
    final_pass: FinalPass,
    array: &mut [Key],
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<PassReport, ChainError> {
    match final_pass {
        FinalPass::Insertion => {
            if array.len() >= 2 {
                gapped_insertion_pass(array, 1, metrics).expect("gap 1 is valid for len >= 2");
            }
            Ok(PassReport::default())
        }
        FinalPass::Chain25 => final_pass_25(array, metrics, mode),
        FinalPass::Chain34 => final_pass_34(array, metrics, mode),
    }
}

/// Sorts `array` with every gap of `gaps` above 1 followed by the chosen
/// final pass, with full operation counts.
pub fn sort_counted(
    final_pass: FinalPass,
    gaps: &GapSequence,
    array: &mut [Key],
) -> Result<SortMetrics, SortError> {
    if final_pass == FinalPass::Insertion {
        return shellsort(array, gaps, AccountingModel::CountOnly);
    }
    let mut metrics = SortMetrics::new();
    presort(array, gaps, &mut metrics)?;
    run_final_pass(final_pass, array, &mut metrics, CheckMode::Trusted)
        .expect("trusted chain passes do not fail");
    Ok(metrics)
}

/// Wall time of one sort. Plain strategies use the counter-free engine; chain
/// strategies are timed with their (cheap) counters in place.
pub fn sort_timed(
    final_pass: FinalPass,
    gaps: &GapSequence,
    array: &mut [Key],
) -> Result<Duration, SortError> {
    if final_pass == FinalPass::Insertion {
        return time_shellsort(array, gaps);
    }
    let start = Instant::now();
    sort_counted(final_pass, gaps, array)?;
    Ok(start.elapsed())
}
