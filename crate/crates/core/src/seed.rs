//! Deterministic, platform-independent random streams keyed by a global seed
//! and a string label.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Generator keyed by `(seed, key)`. Identical inputs give identical streams
/// on every platform.
pub fn keyed_rng(seed: u64, key: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((key.len() as u64).to_le_bytes());
    hasher.update(key.as_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// Derive a child seed, e.g. one per CV run or fold.
pub fn derive_seed(seed: u64, key: &str) -> u64 {
    use rand::RngCore;
    keyed_rng(seed, key).next_u64()
}
