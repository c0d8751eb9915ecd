//! Seeded uniform source shared by every stochastic component.
//!
//! The generator is SplitMix64 with its published constants (Steele, Lea and
//! Flood, "Fast splittable pseudorandom number generators", OOPSLA 2014).
//! Uniform draws take the top 53 bits of each output, so a sequence can be
//! replayed bit-for-bit by any implementation that follows these few lines.

/// Weyl increment added to the state before every output.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_2: u64 = 0x94D0_49BB_1331_11EB;

/// Stream tags for [`SplitMix64::stream`].
pub mod streams {
    pub const DEMAND: u64 = 0;
    pub const DYNAMICS: u64 = 1;
    pub const DESIRED_SPEED: u64 = 2;
    pub const CHANNEL: u64 = 3;
}

/// Seed of stream `tag` derived from a scenario seed.
pub const fn stream_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(GOLDEN_GAMMA)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream derived from one scenario seed. Stream 0 is the
    /// plain seeded generator.
    pub fn stream(seed: u64, tag: u64) -> Self {
        Self::new(stream_seed(seed, tag))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(MIX_1);
        z = (z ^ (z >> 27)).wrapping_mul(MIX_2);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
