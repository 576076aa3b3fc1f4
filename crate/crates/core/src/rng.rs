//! Seeded random streams.
//!
//! Every stochastic routine takes a 64-bit seed. Independent sub-streams
//! (one per simulation run, sketch row, sparsifier draw) are keyed by
//! `(master, a, b)` through [`stream_seed`], a SplitMix64-style mix, and then
//! expanded with ChaCha8.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `(a, b)` of `master`.
///
/// `stream_seed(m, a, b) = mix(mix(mix(m + G) + a·G + G) + b·G + G)` with
/// `G = 0x9E3779B97F4A7C15`; distinct `(a, b)` pairs give unrelated streams.
pub fn stream_seed(master: u64, a: u64, b: u64) -> u64 {
    let s = mix64(master.wrapping_add(GOLDEN));
    let s = mix64(s.wrapping_add(a.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN));
    mix64(s.wrapping_add(b.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN))
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn stream(master: u64, a: u64, b: u64) -> Rng {
    rng(stream_seed(master, a, b))
}
