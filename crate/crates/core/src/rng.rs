//! Per-epoch random streams.
//!
//! Every epoch draws from its own ChaCha8 stream: the 256-bit key is expanded
//! from the campaign's master seed with `SeedableRng::seed_from_u64`, and the
//! epoch index selects the 64-bit ChaCha stream id. ChaCha is counter based,
//! so stream `k` is the same whether epochs run sequentially, in parallel or
//! out of order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator family identifier written into run manifests.
pub const RNG_FAMILY: &str = "chacha8 (rand_chacha 0.9): key = seed_from_u64(master_seed), stream = epoch_index";

pub type EpochRng = ChaCha8Rng;

pub fn epoch_stream(master_seed: u64, epoch_index: u64) -> EpochRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(epoch_index);
    rng
}
