//! Deterministic seed derivation for parallel replication.
//!
//! Replication `r` of sample size `n` under law `law_id` runs on its own
//! generator seeded by an avalanche mix of `(master_seed, law_id, n, r)`, so
//! aggregation order and worker count never touch the random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Folds the components into one seed.
pub fn derive_seed(master: u64, law_id: u64, n: u64, replication: u64) -> u64 {
    let mut h = mix64(master);
    h = mix64(h ^ law_id);
    h = mix64(h ^ n);
    h = mix64(h ^ replication);
    h
}

pub fn rng_for(master: u64, law_id: u64, n: u64, replication: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, law_id, n, replication))
}
