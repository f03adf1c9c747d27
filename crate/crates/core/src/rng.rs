//! Named random streams. Every random choice in the crate draws from a
//! stream derived from `(seed, purpose, path)`, so results never depend on
//! evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, purpose: &str, path: &[u64]) -> StreamRng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((purpose.len() as u64).to_le_bytes());
    h.update(purpose.as_bytes());
    h.update((path.len() as u64).to_le_bytes());
    for &p in path {
        h.update(p.to_le_bytes());
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// A 64-bit child seed, for handing a whole run its own seed.
pub fn derive_seed(seed: u64, purpose: &str, path: &[u64]) -> u64 {
    use rand::RngCore;
    stream(seed, purpose, path).next_u64()
}
