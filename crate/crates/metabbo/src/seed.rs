//! Deterministic seed derivation.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded through
//! [`hash_seeds`], so a run is a pure function of the integers that name it
//! (base seed, instance index, run index, epoch, ...) and never of thread
//! scheduling or wall time.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 mixing step. Statistically strong for deriving child seeds from
/// structured integers (sequential indices differ in few bits).
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fold a list of integers into one well-mixed 64-bit seed.
///
/// Order-sensitive: `hash_seeds(&[a, b]) != hash_seeds(&[b, a])` in general.
pub fn hash_seeds(parts: &[u64]) -> u64 {
    let mut acc = 0x853c_49e6_748f_ea9b_u64;
    for &p in parts {
        acc = splitmix64(acc ^ p);
    }
    splitmix64(acc)
}

/// Seed a [`ChaCha8Rng`] from structured integers via [`hash_seeds`].
pub fn rng_from(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(hash_seeds(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First three outputs of the SplitMix64 sequence started at 0,
        // cross-checked against the published reference implementation.
        let mut s = 0u64;
        let mut out = Vec::new();
        for _ in 0..3 {
            out.push(splitmix64(s));
            s = s.wrapping_add(0x9e37_79b9_7f4a_7c15);
        }
        assert_eq!(out[0], 0xe220_a839_7b1d_cdaf);
        assert_eq!(out[1], 0x6e78_9e6a_a1b9_65f4);
        assert_eq!(out[2], 0x06c4_5d18_8009_454f);
    }

    #[test]
    fn hash_is_order_sensitive_and_stable() {
        assert_ne!(hash_seeds(&[1, 2]), hash_seeds(&[2, 1]));
        assert_eq!(hash_seeds(&[42, 7, 3]), hash_seeds(&[42, 7, 3]));
        assert_ne!(hash_seeds(&[42, 7, 3]), hash_seeds(&[42, 7, 4]));
    }

    #[test]
    fn nearby_indices_produce_distinct_rngs() {
        use rand::RngCore;
        let mut a = rng_from(&[2025, 0, 0]);
        let mut b = rng_from(&[2025, 0, 1]);
        let mut c = rng_from(&[2025, 1, 0]);
        let (x, y, z) = (a.next_u64(), b.next_u64(), c.next_u64());
        assert_ne!(x, y);
        assert_ne!(x, z);
        assert_ne!(y, z);
    }
}
