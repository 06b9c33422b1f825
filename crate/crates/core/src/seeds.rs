//! Deterministic seed derivation.
//!
//! One master seed fans out into independent streams (per repeat, per
//! hill-climb step) through a fixed splitmix-style mixer, so every stream is
//! reproducible and schedule-independent.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with a stream path. For a fixed master and path prefix,
/// distinct final path elements give distinct outputs (the mixer is a
/// bijection per step).
pub fn mix(master: u64, path: &[u64]) -> u64 {
    let mut acc = finalize(master.wrapping_add(GOLDEN));
    for (i, &part) in path.iter().enumerate() {
        let salt = (i as u64 + 1).wrapping_mul(GOLDEN);
        acc = finalize(acc ^ part.wrapping_add(salt));
    }
    acc
}

/// Seed for repeat `index` of a multi-repeat experiment.
pub fn repeat_seed(master: u64, index: u64) -> u64 {
    mix(master, &[index])
}
