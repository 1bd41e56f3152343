//! Deterministic seed derivation.
//!
//! Experiment cells and DART iterations each get their own RNG stream derived
//! from a master seed with a SplitMix64-style mix. The derivation depends only
//! on the values mixed in, never on evaluation order, so adding sweep cells or
//! running channels in parallel does not perturb existing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` and the given mix-in values.
pub fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(seed.wrapping_add(GAMMA));
    for &part in parts {
        state = splitmix64(state.wrapping_add(GAMMA).wrapping_add(part));
    }
    state
}

/// Seeded generator used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
