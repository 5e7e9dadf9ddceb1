//! Reproducible random streams.
//!
//! Every stochastic step draws from a ChaCha stream whose seed is derived from
//! a master seed and a short tuple of indices (input index, level, phase, ...),
//! so sweeps can run in any order or in parallel and still be bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a tuple of indices into a derived seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// A stream derived from `master` and `path`.
pub fn stream(master: u64, path: &[u64]) -> Stream {
    Stream::seed_from_u64(derive_seed(master, path))
}

/// Domain tags that keep derived streams for different purposes apart.
pub mod tag {
    pub const TRAINING: u64 = 0x7472_6169;
    pub const VALIDATION: u64 = 0x7661_6c69;
    pub const INFERENCE: u64 = 0x696e_6665;
    pub const SAMPLER: u64 = 0x7361_6d70;
    pub const COHERENT: u64 = 0x636f_6865;
    pub const FEATURES: u64 = 0x6665_6174;
    pub const TEST: u64 = 0x7465_7374;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn derived_streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, &[1, 2]).random();
        let b: u64 = stream(7, &[1, 2]).random();
        let c: u64 = stream(7, &[2, 1]).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_seed(7, &[]), derive_seed(8, &[]));
    }
}
