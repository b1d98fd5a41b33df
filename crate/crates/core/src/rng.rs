//! Random streams and per-replication seed derivation.
//!
//! Every run owns a private [`ChaCha8Rng`]. Replication `k` of a batch seeded
//! with `base` uses [`derive_seed(base, k)`](derive_seed), so a batch can be
//! split across any number of threads and still reproduce bit for bit.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replication `index` under `base`: the `index`-th splitmix64 output
/// of a generator started at `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(
        base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
    )
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
