use itertools::Itertools;
use shellgap::engine::{gapped_insertion_pass, is_k_sorted};
use shellgap::{shellsort, AccountingModel, GapSequence, Key, SortMetrics};

fn inversions(a: &[Key]) -> u64 {
    let mut c = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] > a[j] {
                c += 1;
            }
        }
    }
    c
}

/// Counts of a straight insertion sort from the permutation's records:
/// shifts are inversions, a key is tested once more than it shifts unless it
/// reaches the front, and a key moves unless it is a running maximum.
fn insertion_oracle(a: &[Key]) -> (u64, u64, u64) {
    let n = a.len() as u64;
    let ex = inversions(a);
    let minima = (1..a.len())
        .filter(|&i| a[..i].iter().all(|&x| x > a[i]))
        .count() as u64;
    let maxima = (0..a.len())
        .filter(|&i| a[..i].iter().all(|&x| x < a[i]))
        .count() as u64;
    (ex + (n - 1) - minima, ex, ex + 2 * (n - maxima))
}

#[test]
fn unit_gap_matches_record_oracle_for_all_small_permutations() {
    for n in 2..=7 {
        for p in (1..=n as Key).permutations(n) {
            let mut a = p.clone();
            let m = shellsort(
                &mut a,
                &GapSequence::unit("unit"),
                AccountingModel::CountOnly,
            )
            .unwrap();
            let (co, ex, exop) = insertion_oracle(&p);
            assert_eq!(
                (m.comparisons, m.exchanges, m.exchange_ops),
                (co, ex, exop),
                "{p:?}"
            );
            assert!(a.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn gapped_pass_equals_insertion_on_each_chain() {
    for p in (1..=7 as Key).permutations(7) {
        for gap in 1..=3 {
            let mut a = p.clone();
            let mut m = SortMetrics::new();
            gapped_insertion_pass(&mut a, gap, &mut m).unwrap();
            let mut want = SortMetrics::new();
            for r in 0..gap {
                let chain: Vec<Key> = p.iter().skip(r).step_by(gap).copied().collect();
                if chain.len() >= 2 {
                    let (co, ex, exop) = insertion_oracle(&chain);
                    want.comparisons += co;
                    want.exchanges += ex;
                    want.exchange_ops += exop;
                }
            }
            assert_eq!(m, want, "{p:?} gap {gap}");
            assert!(is_k_sorted(&a, gap));
        }
    }
}

#[test]
fn sorted_input_costs_one_test_per_key_per_pass() {
    let gaps = GapSequence::new("g", vec![1, 4, 13]).unwrap();
    let mut a: Vec<Key> = (1..=50).collect();
    let m = shellsort(&mut a, &gaps, AccountingModel::CountOnly).unwrap();
    assert_eq!(m.comparisons, (49 + 46 + 37) as u64);
    assert_eq!((m.exchanges, m.exchange_ops), (0, 0));
}

#[test]
fn reversed_input_unit_gap() {
    let n = 30u64;
    let mut a: Vec<Key> = (1..=n as Key).rev().collect();
    let m = shellsort(
        &mut a,
        &GapSequence::unit("unit"),
        AccountingModel::CountOnly,
    )
    .unwrap();
    assert_eq!(m.exchanges, n * (n - 1) / 2);
    assert_eq!(m.comparisons, n * (n - 1) / 2);
    assert_eq!(m.exchange_ops, m.exchanges + 2 * (n - 1));
}
