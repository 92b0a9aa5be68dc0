//! Seeded random streams.
//!
//! Every run derives its seed from `(base_seed, run_index)`; every agent in a
//! run draws from its own ChaCha stream of that seed. Stream 0 is reserved
//! for world initialisation.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_index` under `base_seed`.
pub fn run_seed(base_seed: u64, run_index: u64) -> u64 {
    mix64(base_seed ^ mix64(run_index.wrapping_mul(0xD6E8_FEB8_6659_FD93)))
}

/// Reproducible random stream identified by `(seed, run, stream)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    run: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub const WORLD: u64 = 0;

    pub fn new(base_seed: u64, run_index: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed(base_seed, run_index));
        rng.set_stream(stream);
        Self {
            seed: base_seed,
            run: run_index,
            stream,
            rng,
        }
    }

    /// Stream for agent `agent` (agents are numbered from zero).
    pub fn for_agent(base_seed: u64, run_index: u64, agent: usize) -> Self {
        Self::new(base_seed, run_index, agent as u64 + 1)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn id(&self) -> (u64, u64) {
        (self.run, self.stream)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
