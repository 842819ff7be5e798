//! Final pass after Pratt-34 presorting. Remaining inversions have offset 1,
//! 2 or 5; chains are the sporadic shapes MC1..MC5 and runs of 5-inversions
//! (MC7) whose starts step by 3 or 4.

use super::{
    check_presorted, fix_chain, insertion_tail, ChainDescriptor, ChainError, ChainKind, CheckMode,
    HeadCase, PassReport, Probe, TailCase,
};
use crate::engine::{is_sorted, Key, SortMetrics};

enum Step {
    Chain(ChainDescriptor),
    /// No chain starts here. `ahead` is the 5-inversion test at the next
    /// position.
    Advance {
        ahead: bool,
    },
    /// A configuration outside the chain catalog.
    Anomaly,
}

/// MC7 chain whose first 5-inversion is `(i, i+5)`. `left_clear` means
/// `(i-1, i+1)` is already known not to be inverted.
fn detect_mc7(probe: &mut Probe<'_>, i: usize, left_clear: bool) -> ChainDescriptor {
    let mut starts = vec![i];
    let mut s = i;
    loop {
        if probe.inv(s + 3, s + 8) {
            s += 3;
        } else if probe.inv(s + 4, s + 9) {
            s += 4;
        } else {
            break;
        }
        starts.push(s);
    }
    let head = if !left_clear && probe.inv_left(i.checked_sub(1), i + 1) {
        HeadCase::Left2
    } else if probe.inv(i + 1, i + 2) {
        HeadCase::Inner1
    } else {
        HeadCase::Plain
    };
    let tail = if probe.inv(s + 3, s + 4) {
        TailCase::Inner1
    } else if probe.inv(s + 4, s + 6) {
        TailCase::Right2
    } else {
        TailCase::Plain
    };
    ChainDescriptor::mc7(&starts, head, tail)
}

/// Sporadic chain starting at `p`, assuming no 5-inversion starts at `p` or
/// `p+1`. `Err` on a configuration no 3- and 4-sorted array can have.
fn detect_sporadic(probe: &mut Probe<'_>, p: usize) -> Result<Option<ChainDescriptor>, ()> {
    let kind = if probe.inv(p, p + 2) {
        match (probe.inv(p, p + 1), probe.inv(p + 1, p + 2)) {
            (true, true) => ChainKind::MC4,
            (true, false) => ChainKind::MC2,
            (false, true) => {
                if probe.inv(p + 1, p + 3) {
                    ChainKind::MC5
                } else {
                    ChainKind::MC3
                }
            }
            (false, false) => return Err(()),
        }
    } else if probe.inv(p, p + 1) {
        ChainKind::MC1
    } else {
        return Ok(None);
    };
    Ok(Some(ChainDescriptor::sporadic(kind, p)))
}

fn step(probe: &mut Probe<'_>, i: usize, left_clear: bool) -> Step {
    if probe.inv(i, i + 5) {
        return Step::Chain(detect_mc7(probe, i, left_clear));
    }
    if probe.inv(i + 1, i + 6) {
        return Step::Advance { ahead: true };
    }
    match detect_sporadic(probe, i) {
        Ok(Some(c)) => Step::Chain(c),
        Ok(None) => Step::Advance { ahead: false },
        Err(()) => Step::Anomaly,
    }
}

/// Detects the maximal chain whose interval begins at `start`, assuming no
/// inversion reaches across `start` from the left (as when scanning from the
/// end of the previous chain).
pub fn find_chain_34(
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
        check_presorted(array, 3, 4)?;
    }
    let mut probe = Probe::new(array, metrics);
    match step(&mut probe, start, false) {
        Step::Chain(c) => Ok(Some(c)),
        Step::Advance { ahead: true } => {
            let c = detect_mc7(&mut probe, start + 1, false);
            Ok((c.lo == start).then_some(c))
        }
        Step::Advance { ahead: false } => Ok(None),
        Step::Anomaly => Err(ChainError::OutsideCatalog { at: start }),
    }
}

pub fn fix_chain_34(
    array: &mut [Key],
    chain: &ChainDescriptor,
    metrics: &mut SortMetrics,
    mode: CheckMode,
) -> Result<(), ChainError> {
    fix_chain(array, chain, metrics, mode)
}

/// Gap-1 pass for a 3- and 4-sorted array.
///
/// At each position: a 5-inversion starts an MC7 chain; otherwise the
/// 5-inversion test one step ahead is made, and when it fails a sporadic
/// chain is looked for by testing offset 2, then offset 1. Configurations
/// outside the chain catalog finish with plain insertion and are tallied in
/// the report.
pub fn final_pass_34(
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
        check_presorted(array, 3, 4)?;
    }
    let mut i = 0;
    let mut left_clear = true;
    while i + 1 < n {
        match step(&mut Probe::new(array, metrics), i, left_clear) {
            Step::Chain(chain) => {
                fix_chain(array, &chain, metrics, mode)?;
                report.record(chain.kind);
                i = chain.hi + 1;
                left_clear = true;
            }
            Step::Advance { ahead } => {
                // A failed sporadic scan at i has already tested (i, i+2).
                left_clear = !ahead;
                i += 1;
            }
            Step::Anomaly => {
                insertion_tail(array, i, metrics);
                report.fallbacks += 1;
                break;
            }
        }
    }
    if mode == CheckMode::Verified && !is_sorted(array) {
        return Err(ChainError::Unsorted);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::presort;
    use crate::gaps::{pratt, PrattBasePair};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn presorted(n: usize, seed: u64) -> Vec<Key> {
        let mut a: Vec<Key> = (0..n as Key).collect();
        a.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let gaps = pratt(PrattBasePair::THREE_FOUR, n.max(2)).unwrap();
        presort(&mut a, &gaps, &mut SortMetrics::new()).unwrap();
        a
    }

    #[test]
    fn sorts_presorted_arrays() {
        let mut report = PassReport::default();
        for seed in 0..300 {
            let n = 1 + (seed as usize * 13) % 200;
            let mut a = presorted(n, seed);
            let mut m = SortMetrics::new();
            let r = final_pass_34(&mut a, &mut m, CheckMode::Verified).unwrap();
            assert!(is_sorted(&a), "seed {seed}");
            report.merge(&r);
        }
        assert_eq!(report.fallbacks, 0);
        assert!(report.count(ChainKind::MC7) > 0);
        assert!(report.count(ChainKind::MC1) > 0);
    }

    #[test]
    fn sporadic_shapes_are_found() {
        let cases: [(Vec<Key>, ChainKind, usize); 5] = [
            (vec![2, 1, 3], ChainKind::MC1, 1),
            (vec![3, 1, 2], ChainKind::MC2, 2),
            (vec![2, 3, 1], ChainKind::MC3, 2),
            (vec![3, 2, 1], ChainKind::MC4, 2),
            (vec![2, 4, 1, 3], ChainKind::MC5, 3),
        ];
        for (mut a, kind, hi) in cases {
            let mut m = SortMetrics::new();
            let c = find_chain_34(&mut a, 0, &mut m, CheckMode::Verified)
                .unwrap()
                .unwrap();
            assert_eq!((c.kind, c.lo, c.hi), (kind, 0, hi));
            fix_chain_34(&mut a, &c, &mut m, CheckMode::Verified).unwrap();
            assert!(is_sorted(&a), "{kind}");
        }
    }

    #[test]
    fn single_five_inversion() {
        // (0,5) inverted; sorted order A1 A2 A5 A0 A3 A4.
        let mut a: Vec<Key> = vec![4, 1, 2, 5, 6, 3];
        let mut m = SortMetrics::new();
        let c = find_chain_34(&mut a, 0, &mut m, CheckMode::Verified)
            .unwrap()
            .unwrap();
        assert_eq!((c.kind, c.lo, c.hi, c.length), (ChainKind::MC7, 0, 5, 1));
        assert_eq!(c.ends, Some((HeadCase::Plain, TailCase::Plain)));
        fix_chain_34(&mut a, &c, &mut m, CheckMode::Verified).unwrap();
        assert_eq!(a, [1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn rejects_unpresorted_input_in_verified_mode() {
        let mut a: Vec<Key> = vec![5, 4, 3, 2, 1];
        let mut m = SortMetrics::new();
        assert_eq!(
            final_pass_34(&mut a, &mut m, CheckMode::Verified),
            Err(ChainError::NotPresorted(3))
        );
    }
}
