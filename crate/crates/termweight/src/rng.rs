//! Small deterministic pseudo-random generator used for fold shuffling and
//! stochastic training.
//!
//! Reproducibility across platforms and implementations matters more here
//! than statistical sophistication, so the generator is pinned to SplitMix64
//! (Steele, Lea & Flood's `splitmix64` update with the usual 0x9E3779B97F4A7C15
//! increment) rather than whatever a general-purpose RNG crate currently
//! defaults to. Bounded sampling uses rejection to stay unbiased, and
//! shuffling is a plain Fisher-Yates walk, so a seed fully determines every
//! permutation this module hands out.

/// SplitMix64 generator. Copy-cheap; the whole state is one `u64`.
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, bound)`, unbiased via rejection sampling.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        // Largest multiple of `bound` that fits in u64; draws at or above it
        // would skew the modulo and are rejected.
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let raw = self.next_u64();
            if raw < zone {
                return raw % bound;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
