//! Seed derivation.
//!
//! Every random decision in the pipeline draws from a stream keyed by a
//! tuple of integers (world seed, lot id, counter, ...). Streams for
//! different keys are independent, so regenerating one lot or one tile never
//! shifts the randomness seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into a single 64-bit key.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |acc, &p| mix64(acc ^ mix64(p)))
}

/// Independent stream for `(seed, parts…)`.
pub fn stream(seed: u64, parts: &[u64]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, parts))
}

/// Domain tags used as the first key component, so that e.g. the road
/// generator and the lot splitter never share a stream for the same seed.
pub mod tag {
    pub const ROADS: u64 = 0x524f_4144;
    pub const SUBDIVIDE: u64 = 0x5355_4244;
    pub const LOT: u64 = 0x4c4f_5400;
    pub const TREES: u64 = 0x5452_4545;
    pub const GRAMMAR: u64 = 0x4752_4d52;
    pub const ATTRS: u64 = 0x4154_5452;
    pub const SUBSAMPLE: u64 = 0x5355_4253;
    pub const REAL: u64 = 0x5245_414c;
    pub const SYNTH: u64 = 0x5359_4e54;
    pub const POOL: u64 = 0x504f_4f4c;
}
