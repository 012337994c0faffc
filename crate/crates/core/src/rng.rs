//! Seeded, splittable random streams.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// A deterministic random stream. Child streams are derived from the seed,
/// never from the current generator state, so splitting is order-independent.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child stream number `index`.
    pub fn split(&self, index: u64) -> RandomStream {
        RandomStream::new(mix(self.seed ^ mix(index.wrapping_add(0x632b_e59b_d9b4_e019))))
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable seed for one trial of one (problem, optimizer) pair. Adding other
/// problems or optimizers to a sweep leaves this value untouched.
pub fn trial_seed(master: u64, problem: &str, optimizer: &str, trial: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update((problem.len() as u64).to_le_bytes());
    h.update(problem.as_bytes());
    h.update((optimizer.len() as u64).to_le_bytes());
    h.update(optimizer.as_bytes());
    h.update(trial.to_le_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
