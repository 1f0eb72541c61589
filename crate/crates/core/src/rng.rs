//! Counter-based pseudo-random values keyed by `(seed, counter)`.
//!
//! The generator is SplitMix64: the seed is first mixed into a key, then each
//! counter value `n` (interpreted as its two's-complement `u64` bit pattern)
//! is XORed into the key and passed through the SplitMix64 finalizer once
//! more. Only wrapping integer arithmetic is involved, so the streams are
//! identical on every platform, and the value at `n` does not depend on which
//! other counters were evaluated.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The value of stream `seed` at counter `n`.
#[inline]
pub fn keyed(seed: u64, n: i64) -> u64 {
    splitmix64(splitmix64(seed) ^ n as u64)
}

/// Uniform value in `[0, 1)` with 53 random bits.
#[inline]
pub fn keyed_unit(seed: u64, n: i64) -> f64 {
    (keyed(seed, n) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential view of a keyed stream.
#[derive(Debug, Clone)]
pub struct KeyedStream {
    seed: u64,
    counter: i64,
}

impl KeyedStream {
    pub fn new(seed: u64) -> Self {
        KeyedStream { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = keyed(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        // Multiply-shift reduction; bias is at most bound / 2^64.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}
