//! Counter-based random streams.
//!
//! Every block of walkers draws from its own ChaCha8 stream, keyed by the run
//! seed and the block index. A block's numbers depend on nothing else, so the
//! tally is identical whichever thread runs which block.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct BlockRng(ChaCha8Rng);

impl BlockRng {
    pub fn new(seed: u64, block: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        BlockRng(rng)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
}
