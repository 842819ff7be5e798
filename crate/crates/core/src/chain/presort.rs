use crate::engine::{count_k_inversions, presort, Key, SortError, SortMetrics};
use crate::gaps::{pratt, PrattBasePair};
use crate::rng::{random_permutation, trial_rng};

/// Runs every Pratt pass for `bases` except the final gap-1 pass.
pub fn presort_pratt(
    array: &mut [Key],
    bases: PrattBasePair,
    metrics: &mut SortMetrics,
) -> Result<(), SortError> {
    if array.len() < 2 {
        return Ok(());
    }
    let gaps = pratt(bases, array.len()).expect("n >= 2 and bases >= 2");
    presort(array, &gaps, metrics)
}

/// Largest inversion offset left after presorting with `bases`.
pub fn remaining_offset(bases: PrattBasePair) -> Option<usize> {
    bases.frobenius_number()
}

/// Mean number of largest-offset inversions (3 for Pratt-25, 5 for Pratt-34)
/// left in random permutations of length `n` after presorting.
pub fn mean_presort_inversions(bases: PrattBasePair, n: usize, trials: usize, seed: u64) -> f64 {
    let Some(offset) = remaining_offset(bases) else {
        return f64::NAN;
    };
    if trials == 0 {
        return f64::NAN;
    }
    let total: usize = (0..trials)
        .map(|t| {
            let mut a = random_permutation(n, &mut trial_rng(seed, t as u64));
            presort_pratt(&mut a, bases, &mut SortMetrics::new()).expect("pratt gaps fit");
            count_k_inversions(&a, offset)
        })
        .sum();
    total as f64 / trials as f64
}
