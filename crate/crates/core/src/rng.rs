//! Seeded randomness. Every sampler derives its generator from one 64-bit seed
//! plus a stream index, so batches can run on any thread in any order and
//! still produce the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
