//! Stable derivation of per-task RNG seeds.
//!
//! Simulation cells (function x size x snr x method x replicate) each get
//! their own seed derived from the experiment's base seed and the cell
//! coordinates. Deriving rather than sharing a stream means any cell can be
//! reproduced in isolation, results do not depend on scheduling order, and
//! adding cells never perturbs existing ones. The mixer is a fixed-constant
//! SplitMix64 chain, so derived seeds are stable across platforms, Rust
//! versions, and releases — nothing here depends on `std` hashing.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// SplitMix64 output mixer: bijective, avalanching, and cheap.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Folds a sequence of coordinate words into `base`, one mix per word.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(base);
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}

/// Stable 64-bit digest of a label (FNV-1a), for mixing names into seeds.
pub fn label_digest(label: &str) -> u64 {
    let mut hash: u64 = 0xCBF29CE484222325;
    for b in label.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001B3);
    }
    hash
}

/// The RNG used everywhere noise is drawn; seeded, portable, fast.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
