//! All randomness comes from ChaCha8 seeded with a single `u64` through
//! [`SeedableRng::seed_from_u64`]. Independent consumers of one seed use
//! distinct ChaCha streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn from_seed_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// First word of `stream`, for handing a sub-seed to a seeded component.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    use rand::RngCore;
    from_seed_stream(seed, stream).next_u64()
}
