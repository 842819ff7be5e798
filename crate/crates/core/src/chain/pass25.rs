//! Final pass after Pratt-25 presorting. Remaining inversions have offset 1
//! or 3; chains are single 1-inversions (MC1) and runs of 3-inversions
//! stepping by 2 (MC6).

use super::{
    check_presorted, fix_chain, ChainDescriptor, ChainError, ChainKind, CheckMode, PassReport,
    Probe,
};
use crate::engine::{is_sorted, Key, SortMetrics};

/// Walks the 3-inversion run beginning at `start`, which must already be
/// known to be a 3-inversion. Returns the run length.
fn walk_mc6(probe: &mut Probe<'_>, start: usize) -> usize {
    let mut k = 1;
    let mut s = start;
    while probe.inv(s + 2, s + 5) {
        s += 2;
        k += 1;
    }
    k
}

/// Detects the maximal chain starting at `start`, if any.
///
/// MC6 when `(start, start+3)` is inverted. MC1 when only `(start, start+1)`
/// is inverted and it is not nested in the 3-inversion `(start-2, start+1)`.
pub fn find_chain_25(
    array: &mut [Key],
    start: usize,
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<Option<ChainDescriptor>, ChainError> {
    if start >= array.len() && !array.is_empty() {
        return Err(ChainError::OutOfRange {
            start,
            len: array.len(),
        });
    }
    if mode == CheckMode::Verified {
        check_presorted(array, 2, 5)?;
    }
    let mut probe = Probe::new(array, metrics);
    if probe.inv(start, start + 3) {
        let k = walk_mc6(&mut probe, start);
        return Ok(Some(ChainDescriptor::mc6(start, k)));
    }
    if probe.inv(start, start + 1) && !probe.inv_left(start.checked_sub(2), start + 1) {
        return Ok(Some(ChainDescriptor::sporadic(ChainKind::MC1, start)));
    }
    Ok(None)
}

pub fn fix_chain_25(
    array: &mut [Key],
    chain: &ChainDescriptor,
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<(), ChainError> {
    fix_chain(array, chain, metrics, mode)
}

/// Gap-1 pass for a 2- and 5-sorted array.
///
/// At each position: a 3-inversion starts an MC6 run; otherwise the
/// 3-inversion test one step ahead is made, and when it fails the
/// 1-inversion at the current position is fixed.
pub fn final_pass_25(
    array: &mut [Key],
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<PassReport, ChainError> {
    let mut report = PassReport::default();
    let n = array.len();
    if n < 2 {
        return Ok(report);
    }
    if mode == CheckMode::Verified {
        check_presorted(array, 2, 5)?;
    }
    let mut i = 0;
    while i + 1 < n {
        if Probe::new(array, metrics).inv(i, i + 3) {
            let k = walk_mc6(&mut Probe::new(array, metrics), i);
            let chain = ChainDescriptor::mc6(i, k);
            fix_chain(array, &chain, metrics, mode)?;
            report.record(ChainKind::MC6);
            i = chain.hi + 1;
            continue;
        }
        let mut probe = Probe::new(array, metrics);
        if !probe.inv(i + 1, i + 4) && probe.inv(i, i + 1) {
            let chain = ChainDescriptor::sporadic(ChainKind::MC1, i);
            fix_chain(array, &chain, metrics, mode)?;
            report.record(ChainKind::MC1);
        }
        i += 1;
    }
    if mode == CheckMode::Verified && !is_sorted(array) {
        return Err(ChainError::Unsorted);
    }
    Ok(report)
}
