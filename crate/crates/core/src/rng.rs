//! Seeded randomness.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with `seed_from_u64(seed)` and switched to stream `trial` with
//! `set_stream`. Trials are therefore independent of scheduling order and of
//! how many other trials run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::Key;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Fisher-Yates shuffle, drawing `j` uniformly from `0..=i` for `i` from the
/// end down to 1.
pub fn shuffle<T, R: Rng + ?Sized>(items: &mut [T], rng: &mut R) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Uniform random permutation of `1..=n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Key> {
    let mut a: Vec<Key> = (1..=n as Key).collect();
    shuffle(&mut a, rng);
    a
}

/// Mixes a string into a 64-bit seed (FNV-1a followed by a SplitMix64
/// finalizer). Stable across platforms and releases.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
