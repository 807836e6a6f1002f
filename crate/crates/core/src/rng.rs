//! Seeded random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded with a
//! 64-bit stream seed. Sub-streams are derived with [`derive_seed`], which
//! folds each key into the parent seed with the SplitMix64 finalizer:
//!
//! ```text
//! seed(master, [k0, k1, ...]) = mix(... mix(mix(master ^ GOLDEN) ^ k0 ...) ...)
//! ```
//!
//! so trial `t` of grid point `g` in an experiment uses
//! `derive_seed(master, &[g, t])`. Streams for distinct key paths are
//! unrelated; the same path always yields the same stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and a key path.
pub fn derive_seed(master: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(splitmix(master ^ GOLDEN), |acc, &k| splitmix(acc ^ splitmix(k)))
}

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn substream(master: u64, keys: &[u64]) -> StreamRng {
    stream(derive_seed(master, keys))
}
