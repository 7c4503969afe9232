//! SplitMix64: a seedable 64-bit generator with a published algorithm.
//!
//! Chosen so that sampled trajectories are reproducible from a seed across
//! implementations, not just across runs of this binary. The state update is
//! `s += 0x9E3779B97F4A7C15`; outputs are the finalizer
//!
//! ```text
//! z = s; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!        z ^= z >> 27; z *= 0x94D049BB133111EB;
//!        z ^= z >> 31;
//! ```
//!
//! (Steele, Lea, Flood, "Fast splittable pseudorandom number generators",
//! OOPSLA 2014.) Doubles in `[0, 1)` take the top 53 bits: `(z >> 11) * 2^-53`.

const GAMMA: u64 = 0x9E3779B97F4A7C15;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for substream `index`: seeded by mixing the index
    /// into the base seed, so substreams can be consumed in any order.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut base = SplitMix64::new(seed ^ mix(index.wrapping_mul(GAMMA)));
        base.state = base.next_u64();
        base
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform double in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[lo, hi)` (degenerate bounds return `lo`).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^= z >> 31;
    z
}
