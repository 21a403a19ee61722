//! Bundled demo inputs.

use crate::rng::seeded_bytes;

/// About 4 KB of plain ASCII English prose.
pub const ENGLISH_SAMPLE: &str = include_str!("../data/english.txt");

pub fn english_sample() -> &'static [u8] {
    ENGLISH_SAMPLE.as_bytes()
}

/// Uniform random bytes of the same length as `like`.
pub fn random_like(like: &[u8], seed: u64) -> Vec<u8> {
    seeded_bytes(seed, like.len())
}
