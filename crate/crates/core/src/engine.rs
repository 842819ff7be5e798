//! Instrumented Shellsort engine.
//!
//! Every pass is a move-based gapped insertion: the key being inserted is
//! saved to a temporary, larger keys are shifted one gap stride to the right,
//! and the key is written into the hole. Three counters are kept:
//!
//! * `comparisons`: one per key-vs-key test, including the test that ends the
//!   inner loop. No comparison is charged when the index test fails first.
//! * `exchanges`: one per single-stride element shift.
//! * `exchange_ops`: assignments under the decomposed model. An insertion that
//!   shifts `m >= 1` elements costs `m + 2` (save, `m` shifts, place); an
//!   insertion that does not move costs nothing.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaps::GapSequence;

/// Array element. Experiments sort permutations of `1..=N`.
pub type Key = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("gap {gap} is invalid for an array of length {len} (need 1 <= gap < len)")]
    InvalidGap { gap: usize, len: usize },
    #[error("gap sequence does not end with gap 1; output would not be sorted")]
    MissingUnitGap,
    #[error("gap sequence is not strictly increasing")]
    NotIncreasing,
}

/// Operation counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortMetrics {
    pub comparisons: u64,
    pub exchanges: u64,
    pub exchange_ops: u64,
    /// Wall time in nanoseconds, only set in [`AccountingModel::CountAndTime`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ns: Option<u64>,
}

impl SortMetrics {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of insertions that displaced their element, recovered from the
    /// counter relation `exchange_ops = exchanges + 2 * displaced`.
    pub fn displaced_insertions(&self) -> u64 {
        (self.exchange_ops - self.exchanges) / 2
    }

    pub fn add(&mut self, other: &SortMetrics) {
        self.comparisons += other.comparisons;
        self.exchanges += other.exchanges;
        self.exchange_ops += other.exchange_ops;
        self.wall_time_ns = match (self.wall_time_ns, other.wall_time_ns) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccountingModel {
    #[default]
    CountOnly,
    CountAndTime,
}

/// One gapped insertion pass. Leaves `array` gap-sorted.
pub fn gapped_insertion_pass(
    array: &mut [Key],
    gap: usize,
    metrics: &mut SortMetrics,
) -> Result<(), SortError> {
    let len = array.len();
    if gap == 0 || gap >= len {
        return Err(SortError::InvalidGap { gap, len });
    }
    let mut comparisons = 0u64;
    let mut shifts = 0u64;
    let mut displaced = 0u64;
    for i in gap..len {
        let key = array[i];
        let mut j = i;
        while j >= gap {
            comparisons += 1;
            let prev = array[j - gap];
            if prev > key {
                array[j] = prev;
                j -= gap;
            } else {
                break;
            }
        }
        if j != i {
            array[j] = key;
            shifts += ((i - j) / gap) as u64;
            displaced += 1;
        }
    }
    metrics.comparisons += comparisons;
    metrics.exchanges += shifts;
    metrics.exchange_ops += shifts + 2 * displaced;
    Ok(())
}

fn check_gaps(len: usize, gaps: &[usize]) -> Result<(), SortError> {
    if gaps.first() != Some(&1) {
        return Err(SortError::MissingUnitGap);
    }
    if gaps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SortError::NotIncreasing);
    }
    if len >= 2 {
        if let Some(&gap) = gaps.iter().find(|&&g| g >= len) {
            return Err(SortError::InvalidGap { gap, len });
        }
    }
    Ok(())
}

/// Shellsort `array` with `gaps`, largest gap first.
///
/// Arrays of length 0 or 1 are already sorted and cost nothing; for them the
/// only accepted sequence is `[1]`.
pub fn shellsort(
    array: &mut [Key],
    gaps: &GapSequence,
    model: AccountingModel,
) -> Result<SortMetrics, SortError> {
    shellsort_gaps(array, gaps.gaps(), model)
}

/// As [`shellsort`], over a raw ascending gap list.
pub fn shellsort_gaps(
    array: &mut [Key],
    gaps: &[usize],
    model: AccountingModel,
) -> Result<SortMetrics, SortError> {
    check_gaps(array.len(), gaps)?;
    let mut metrics = SortMetrics::new();
    if array.len() < 2 {
        if model == AccountingModel::CountAndTime {
            metrics.wall_time_ns = Some(0);
        }
        return Ok(metrics);
    }
    let start = Instant::now();
    for &gap in gaps.iter().rev() {
        gapped_insertion_pass(array, gap, &mut metrics)?;
    }
    if model == AccountingModel::CountAndTime {
        metrics.wall_time_ns = Some(start.elapsed().as_nanos() as u64);
    }
    Ok(metrics)
}

/// Runs every pass of `gaps` except the final gap-1 pass.
pub fn presort(
    array: &mut [Key],
    gaps: &GapSequence,
    metrics: &mut SortMetrics,
) -> Result<(), SortError> {
    check_gaps(array.len(), gaps.gaps())?;
    if array.len() < 2 {
        return Ok(());
    }
    for &gap in gaps.gaps().iter().skip(1).rev() {
        gapped_insertion_pass(array, gap, metrics)?;
    }
    Ok(())
}

/// Counter-free twin of [`gapped_insertion_pass`], for timing runs.
#[inline]
fn plain_pass(array: &mut [Key], gap: usize) {
    for i in gap..array.len() {
        let key = array[i];
        let mut j = i;
        while j >= gap && array[j - gap] > key {
            array[j] = array[j - gap];
            j -= gap;
        }
        array[j] = key;
    }
}

/// Counter-free Shellsort. Same passes as [`shellsort`], no bookkeeping.
pub fn shellsort_uncounted(array: &mut [Key], gaps: &GapSequence) -> Result<(), SortError> {
    check_gaps(array.len(), gaps.gaps())?;
    if array.len() < 2 {
        return Ok(());
    }
    for &gap in gaps.gaps().iter().rev() {
        plain_pass(array, gap);
    }
    Ok(())
}

/// Wall time of a counter-free Shellsort, monotonic clock.
pub fn time_shellsort(array: &mut [Key], gaps: &GapSequence) -> Result<Duration, SortError> {
    check_gaps(array.len(), gaps.gaps())?;
    let start = Instant::now();
    if array.len() >= 2 {
        for &gap in gaps.gaps().iter().rev() {
            plain_pass(array, gap);
        }
    }
    Ok(start.elapsed())
}

/// True iff `array[i] <= array[i + k]` for every valid `i`.
pub fn is_k_sorted(array: &[Key], k: usize) -> bool {
    if k == 0 || k >= array.len() {
        return true;
    }
    array.iter().zip(&array[k..]).all(|(a, b)| a <= b)
}

/// Number of positions `i` with `array[i] > array[i + k]`.
pub fn count_k_inversions(array: &[Key], k: usize) -> usize {
    if k == 0 || k >= array.len() {
        return 0;
    }
    array.iter().zip(&array[k..]).filter(|(a, b)| a > b).count()
}

/// Offsets `k <= max_offset` for which the array still has a k-inversion.
pub fn remaining_inversion_offsets(array: &[Key], max_offset: usize) -> BTreeSet<usize> {
    (1..=max_offset.min(array.len().saturating_sub(1)))
        .filter(|&k| count_k_inversions(array, k) > 0)
        .collect()
}

pub fn is_sorted(array: &[Key]) -> bool {
    array.windows(2).all(|w| w[0] <= w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pass(mut v: Vec<Key>, gap: usize) -> (Vec<Key>, SortMetrics) {
        let mut m = SortMetrics::new();
        gapped_insertion_pass(&mut v, gap, &mut m).unwrap();
        (v, m)
    }

    #[test]
    fn single_swap_costs_three_assignments() {
        let (v, m) = pass(vec![2, 1], 1);
        assert_eq!(v, [1, 2]);
        assert_eq!((m.comparisons, m.exchanges, m.exchange_ops), (1, 1, 3));
    }

    #[test]
    fn sorted_input_costs_only_comparisons() {
        let (v, m) = pass(vec![1, 2, 3], 1);
        assert_eq!(v, [1, 2, 3]);
        assert_eq!((m.comparisons, m.exchanges, m.exchange_ops), (2, 0, 0));
    }

    #[test]
    fn hand_traced_three_element_pass() {
        // i=1: 3>1 shift, index test stops the loop -> 1 comparison.
        // i=2: 3>2 shift, 1>2 fails -> 2 comparisons.
        let (v, m) = pass(vec![3, 1, 2], 1);
        assert_eq!(v, [1, 2, 3]);
        assert_eq!((m.comparisons, m.exchanges, m.exchange_ops), (3, 2, 6));
    }

    #[test]
    fn invalid_gaps_are_rejected() {
        let mut m = SortMetrics::new();
        let mut v = vec![3, 2, 1];
        assert_eq!(
            gapped_insertion_pass(&mut v, 0, &mut m),
            Err(SortError::InvalidGap { gap: 0, len: 3 })
        );
        assert_eq!(
            gapped_insertion_pass(&mut v, 3, &mut m),
            Err(SortError::InvalidGap { gap: 3, len: 3 })
        );
        assert_eq!(m, SortMetrics::new());
    }

    #[test]
    fn shellsort_requires_unit_gap() {
        let mut v = vec![3, 2, 1, 0];
        assert_eq!(
            shellsort_gaps(&mut v, &[2, 3], AccountingModel::CountOnly),
            Err(SortError::MissingUnitGap)
        );
        assert_eq!(
            shellsort_gaps(&mut v, &[1, 3, 2], AccountingModel::CountOnly),
            Err(SortError::NotIncreasing)
        );
        assert_eq!(
            shellsort_gaps(&mut v, &[1, 4], AccountingModel::CountOnly),
            Err(SortError::InvalidGap { gap: 4, len: 4 })
        );
    }

    #[test]
    fn tiny_arrays_are_free() {
        let mut v: Vec<Key> = vec![7];
        let m = shellsort_gaps(&mut v, &[1], AccountingModel::CountAndTime).unwrap();
        assert_eq!((m.comparisons, m.exchanges, m.exchange_ops), (0, 0, 0));
        assert_eq!(m.wall_time_ns, Some(0));
        let mut e: Vec<Key> = vec![];
        assert!(shellsort_gaps(&mut e, &[1], AccountingModel::CountOnly).is_ok());
    }

    #[test]
    fn timing_mode_records_time() {
        let mut v: Vec<Key> = (1..=500).rev().collect();
        let m = shellsort_gaps(&mut v, &[1, 4, 13, 40], AccountingModel::CountAndTime).unwrap();
        assert!(m.wall_time_ns.is_some());
        assert!(is_sorted(&v));
    }

    #[test]
    fn k_sorted_examples() {
        assert!(is_k_sorted(&[1, 3, 2, 4], 2));
        assert!(!is_k_sorted(&[1, 3, 2, 4], 1));
        assert!(is_k_sorted(&[4, 3, 2, 1], 4));
    }

    #[test]
    fn k_inversion_counts() {
        let rev: Vec<Key> = (1..=10).rev().collect();
        assert_eq!(count_k_inversions(&rev, 1), 9);
        let sorted: Vec<Key> = (1..=10).collect();
        for k in 1..10 {
            assert_eq!(count_k_inversions(&sorted, k), 0);
        }
        assert!(remaining_inversion_offsets(&sorted, 9).is_empty());
        assert_eq!(
            remaining_inversion_offsets(&[2, 1, 4, 3], 3),
            [1].into_iter().collect()
        );
    }

    #[test]
    fn uncounted_twin_sorts_identically() {
        let gaps = GapSequence::new("t", vec![1, 3, 7]).unwrap();
        let input: Vec<Key> = vec![9, 3, 7, 1, 8, 2, 6, 4, 5, 10, 0];
        let mut a = input.clone();
        let mut b = input;
        shellsort(&mut a, &gaps, AccountingModel::CountOnly).unwrap();
        shellsort_uncounted(&mut b, &gaps).unwrap();
        assert_eq!(a, b);
        assert!(is_sorted(&a));
    }
}
