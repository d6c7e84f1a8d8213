use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Counter-based random stream: sample `i` is a pure function of
/// `(seed, counter + i)`, so results do not depend on evaluation order or on
/// how work is split across threads.
///
/// The generator is SplitMix64 addressed directly by its step index; the seed
/// is pre-mixed so nearby seeds give unrelated streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomStream {
    pub seed: u64,
    pub counter: u64,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Stream starting `offset` samples further along.
    pub fn advanced(&self, offset: u64) -> Self {
        Self {
            seed: self.seed,
            counter: self.counter.wrapping_add(offset),
        }
    }

    #[inline]
    pub fn u64_at(&self, i: u64) -> u64 {
        let key = mix64(self.seed ^ 0x6A09_E667_F3BC_C909);
        let step = self.counter.wrapping_add(i).wrapping_add(1);
        mix64(key.wrapping_add(step.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform on `(0, 1]` with 53 bits of resolution.
    #[inline]
    pub fn uniform_at(&self, i: u64) -> f64 {
        ((self.u64_at(i) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Exponential(1) draw, `-ln U`.
    #[inline]
    pub fn exponential_at(&self, i: u64) -> f64 {
        -self.uniform_at(i).ln()
    }
}

/// `|h|²` for a unit-variance circular complex Gaussian `h`: Exponential(1).
#[inline]
pub fn sample_exponential_unit(stream: &RandomStream, i: u64) -> f64 {
    stream.exponential_at(i)
}
