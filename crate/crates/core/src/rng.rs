//! Seeded, splittable random streams.
//!
//! Every random draw in the crate comes from a ChaCha20 generator whose seed
//! is `run_seed ^ splitmix64(stream)`. Distinct streams (restart index,
//! Hadamard-test index, ...) are therefore independent and replayable.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identity of the generator, recorded in reports for replay.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9), stream seed = seed ^ splitmix64(stream)";

pub type StreamRng = ChaCha20Rng;

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ splitmix64(stream)
}

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(stream_seed(seed, stream))
}
