//! Deterministic counter-based random streams for reproducible simulation.
//!
//! Every attack cycle draws from its own stream keyed by `(seed, index)`, so
//! batches can run on any number of threads and still reduce to bit-identical
//! results. The generator is a splitmix64 walk seeded through a double
//! avalanche; not cryptographic, never used for secrets.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn avalanche(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A single deterministic stream.
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

impl Stream {
    /// Stream `index` of the family identified by `seed`. Distinct indices
    /// give statistically independent sequences.
    pub fn new(seed: u64, index: u64) -> Self {
        let state = avalanche(seed ^ avalanche(index.wrapping_add(GOLDEN)));
        Stream { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        avalanche(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Exponential with the given rate, via inversion. The result is in
    /// `[0, inf)`; rate must be positive.
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        debug_assert!(rate > 0.0);
        // 1 - U is in (0, 1], so ln never sees zero.
        -(1.0 - self.next_f64()).ln() / rate
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Poisson count by Knuth's product-of-uniforms method, chunked so large
    /// means stay in the product's dynamic range. Means here are almost
    /// always below 1; large values only occur on exponentially rare long
    /// withholding phases.
    pub fn poisson(&mut self, mean: f64) -> u64 {
        debug_assert!(mean >= 0.0);
        let mut remaining = mean;
        let mut total = 0u64;
        loop {
            let chunk = remaining.min(40.0);
            let limit = (-chunk).exp();
            let mut product = self.next_f64().max(f64::MIN_POSITIVE);
            while product > limit {
                total += 1;
                product *= self.next_f64().max(f64::MIN_POSITIVE);
            }
            remaining -= chunk;
            if remaining <= 0.0 {
                return total;
            }
        }
    }
}
