//! Seed derivation. Every parallel work item gets its own generator derived
//! from `(master seed, item index)`, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(master: u64, stream: u64) -> Rng {
    rng_from(derive_seed(master, stream))
}

/// Seed for a labelled sub-task (e.g. a grid cell), stable across runs.
pub fn label_seed(master: u64, label: &str) -> u64 {
    label
        .bytes()
        .fold(splitmix64(master), |h, b| splitmix64(h ^ b as u64))
}
