//! Property suites behind `shellgap verify` and the acceptance harness.
//!
//! Each suite returns a [`SuiteReport`] with the number of cases checked and
//! the first few failures.

use std::fmt;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    presort_pratt, run_final_pass, structural_violations, ChainKind, CheckMode, FinalPass,
    PassReport,
};
use crate::engine::{gapped_insertion_pass, Key, SortMetrics};
use crate::gaps::PrattBasePair;
use crate::rng::{derive_seed, random_permutation, trial_rng};

const KEEP_FAILURES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases > 0
    }

    fn absorb(&mut self, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(e) = outcome {
            self.failure_count += 1;
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(e);
            }
        }
    }

    fn merge(mut self, other: SuiteReport) -> SuiteReport {
        self.cases += other.cases;
        self.failure_count += other.failure_count;
        let room = KEEP_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failure_count
        )?;
        for e in &self.failures {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// The two base pairs with a structure-aware final pass.
pub fn chain_settings() -> [(PrattBasePair, FinalPass); 2] {
    [
        (PrattBasePair::new(2, 5).unwrap(), FinalPass::Chain25),
        (PrattBasePair::new(3, 4).unwrap(), FinalPass::Chain34),
    ]
}

fn allowed_kinds(pass: FinalPass) -> &'static [ChainKind] {
    match pass {
        FinalPass::Chain25 => &[ChainKind::MC1, ChainKind::MC6],
        FinalPass::Chain34 => &[
            ChainKind::MC1,
            ChainKind::MC2,
            ChainKind::MC3,
            ChainKind::MC4,
            ChainKind::MC5,
            ChainKind::MC7,
        ],
        FinalPass::Insertion => &[],
    }
}

/// Presorts `input` with `bases`, then runs `pass` in verified mode and a
/// plain gap-1 pass on a copy. Both must agree with `1..=n`.
fn check_equivalence(
    input: &[Key],
    bases: PrattBasePair,
    pass: FinalPass,
) -> Result<PassReport, String> {
    let mut chain = input.to_vec();
    presort_pratt(&mut chain, bases, &mut SortMetrics::new()).map_err(|e| e.to_string())?;
    let mut plain = chain.clone();
    let report = run_final_pass(
        pass,
        &mut chain,
        &mut SortMetrics::new(),
        CheckMode::Verified,
    )
    .map_err(|e| format!("{pass:?} on {input:?}: {e}"))?;
    if plain.len() >= 2 {
        gapped_insertion_pass(&mut plain, 1, &mut SortMetrics::new()).expect("gap 1 fits");
    }
    if chain != plain {
        return Err(format!("{pass:?} disagrees with plain pass on {input:?}"));
    }
    if chain.iter().enumerate().any(|(i, &v)| v != i as Key + 1) {
        return Err(format!("{pass:?} left {input:?} unsorted"));
    }
    if report.fallbacks > 0 {
        return Err(format!("{pass:?} fell back to insertion on {input:?}"));
    }
    let allowed = allowed_kinds(pass);
    if let Some(k) = ChainKind::ALL
        .iter()
        .find(|k| report.count(**k) > 0 && !allowed.contains(k))
    {
        return Err(format!("{pass:?} reported {k:?} on {input:?}"));
    }
    Ok(report)
}

/// Every permutation of `1..=n` for `n <= max_n`, both chain passes.
pub fn exhaustive_chain_suite(max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new(&format!("exhaustive chain passes, n <= {max_n}"));
    for n in 0..=max_n {
        for (bases, pass) in chain_settings() {
            let part = (1..=n as Key)
                .permutations(n)
                .par_bridge()
                .fold(
                    || SuiteReport::new(""),
                    |mut r, p| {
                        r.absorb(check_equivalence(&p, bases, pass).map(|_| ()));
                        r
                    },
                )
                .reduce(|| SuiteReport::new(""), SuiteReport::merge);
            report = report.merge(part);
        }
    }
    report
}

/// `trials` seeded permutations per size, both chain passes, compared with
/// the plain final pass.
pub fn random_equivalence_suite(sizes: &[usize], trials: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(&format!(
        "chain pass equals plain pass, {trials} trials per size"
    ));
    for &n in sizes {
        let stream = derive_seed(seed, &format!("equivalence/n={n}"));
        let part = (0..trials)
            .into_par_iter()
            .fold(
                || SuiteReport::new(""),
                |mut r, t| {
                    let a = random_permutation(n, &mut trial_rng(stream, t as u64));
                    for (bases, pass) in chain_settings() {
                        r.absorb(
                            check_equivalence(&a, bases, pass)
                                .map(|_| ())
                                .map_err(|e| format!("n={n} trial {t}: {}", truncate(&e))),
                        );
                    }
                    r
                },
            )
            .reduce(|| SuiteReport::new(""), SuiteReport::merge);
        report = report.merge(part);
    }
    report
}

/// `arrays` presorted arrays per base pair with lengths drawn from
/// `sizes`, checked against the structural rules.
pub fn lemma_suite(
    arrays: usize,
    sizes: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> SuiteReport {
    let mut report = SuiteReport::new(&format!("structural rules, {arrays} arrays per base pair"));
    for (bases, _) in chain_settings() {
        let stream = derive_seed(seed, &format!("lemmas/{}", bases.name()));
        let sizes = sizes.clone();
        let part = (0..arrays)
            .into_par_iter()
            .fold(
                || SuiteReport::new(""),
                |mut r, t| {
                    let mut rng = trial_rng(stream, t as u64);
                    let n = rng.gen_range(sizes.clone());
                    let mut a = random_permutation(n, &mut rng);
                    presort_pratt(&mut a, bases, &mut SortMetrics::new()).expect("pratt gaps fit");
                    let v = structural_violations(&a, bases);
                    r.absorb(match v.first() {
                        None => Ok(()),
                        Some(first) => Err(format!(
                            "{} n={n} trial {t}: {} violations, first {first}",
                            bases.name(),
                            v.len()
                        )),
                    });
                    r
                },
            )
            .reduce(|| SuiteReport::new(""), SuiteReport::merge);
        report = report.merge(part);
    }
    report
}

fn truncate(s: &str) -> String {
    const MAX: usize = 160;
    if s.len() <= MAX {
        s.to_string()
    } else {
        format!("{}...", &s[..MAX])
    }
}

/// The suites run by `shellgap verify`.
pub fn standard_suites(seed: u64, quick: bool) -> Vec<SuiteReport> {
    let (max_n, trials, arrays) = if quick {
        (6, 500, 500)
    } else {
        (8, 10_000, 10_000)
    };
    vec![
        exhaustive_chain_suite(max_n),
        random_equivalence_suite(&[100, 1000], trials, seed),
        lemma_suite(arrays, 50..=2000, seed),
    ]
}
