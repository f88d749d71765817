use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Recorded in manifests next to the seed.
pub const GENERATOR_NAME: &str = "xoshiro256** seeded by SplitMix64";

/// Deterministic generator for sampling.
///
/// The 256-bit state is four successive SplitMix64 outputs from the seed;
/// bounded draws use rejection so results are identical across platforms
/// and reproducible from any language implementing the same two generators.
#[derive(Debug, Clone)]
pub struct SampleRng {
    inner: Xoshiro256StarStar,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: Xoshiro256StarStar::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n`. Draws below `2^64 mod n` are rejected.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform_below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    /// Chooses `k` of `0..len` without replacement (partial Fisher–Yates),
    /// in draw order.
    pub fn choose_indices(&mut self, len: usize, k: usize) -> Vec<usize> {
        assert!(k <= len);
        let mut idx: Vec<usize> = (0..len).collect();
        for i in 0..k {
            let j = i + self.uniform_below((len - i) as u64) as usize;
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx
    }
}
