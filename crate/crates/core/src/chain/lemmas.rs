//! Structural properties of arrays presorted with a coprime Pratt base pair.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::Key;
use crate::gaps::PrattBasePair;

/// Largest inversion offset scanned by [`structural_violations`].
const OFFSET_SCAN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// An inversion at an offset representable as `x*p + y*q`.
    RepresentableOffset,
    /// Inversions `(i, i+a)` and `(i+a, i+a+b)` with `a + b` representable.
    Concatenation,
    /// A 3-inversion `(i, i+3)` without 1-inversions at `i` and `i+2`, or
    /// with one at `i+1` (2-5 presort).
    Nesting3,
    /// 3-inversions starting at `i` and `i+1` (2-5 presort).
    Crossing3,
    /// Three consecutive 1-inversions (3-4 presort).
    TripleOne,
    /// A 2-inversion nested in a 5-inversion (3-4 presort).
    Nesting5,
    /// 5-inversions starting one or two apart (3-4 presort).
    Crossing5,
    /// A 5-inversion followed by 5-inversions at both `+3` and `+4`.
    DoubleSuccessor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub at: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at index {}", self.rule, self.at)
    }
}

/// Checks the structural rules that hold for any array that is p- and
/// q-sorted. Returns every violation found; bases that are not coprime yield
/// no checks.
pub fn structural_violations(array: &[Key], bases: PrattBasePair) -> Vec<Violation> {
    let Some(complement) = bases.semigroup_complement() else {
        return Vec::new();
    };
    let n = array.len();
    let inv = |i: usize, k: usize| i + k < n && array[i] > array[i + k];
    let allowed = |k: usize| complement.contains(&k);
    let mut out = Vec::new();
    let mut push = |rule, at| out.push(Violation { rule, at });

    for i in 0..n {
        for k in 1..=OFFSET_SCAN.min(n.saturating_sub(1 + i)) {
            if !allowed(k) && inv(i, k) {
                push(Rule::RepresentableOffset, i);
            }
        }
        for &a in &complement {
            if !inv(i, a) {
                continue;
            }
            for &b in &complement {
                if !allowed(a + b) && inv(i + a, b) {
                    push(Rule::Concatenation, i);
                }
            }
        }
    }

    match (bases.p(), bases.q()) {
        (2, 5) | (5, 2) => {
            for i in 0..n {
                if inv(i, 3) {
                    if !inv(i, 1) || !inv(i + 2, 1) || inv(i + 1, 1) {
                        push(Rule::Nesting3, i);
                    }
                    if inv(i + 1, 3) {
                        push(Rule::Crossing3, i);
                    }
                }
            }
        }
        (3, 4) | (4, 3) => {
            for i in 0..n {
                if inv(i, 1) && inv(i + 1, 1) && inv(i + 2, 1) {
                    push(Rule::TripleOne, i);
                }
                if inv(i, 5) {
                    if inv(i + 1, 2) || inv(i + 2, 2) {
                        push(Rule::Nesting5, i);
                    }
                    if inv(i + 1, 5) || inv(i + 2, 5) {
                        push(Rule::Crossing5, i);
                    }
                    if inv(i + 3, 5) && inv(i + 4, 5) {
                        push(Rule::DoubleSuccessor, i);
                    }
                }
            }
        }
        _ => {}
    }
    out
}
