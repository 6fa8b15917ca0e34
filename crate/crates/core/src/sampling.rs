//! Reproducible random sampling.
//!
//! The generator is SplitMix64 (Steele, Lea, Flood 2014): state advances by
//! `0x9E3779B97F4A7C15`, output is the state passed through the `mix64`
//! finaliser. A `u64` becomes a float in `[0, 1)` as `(x >> 11) · 2⁻⁵³`.
//! Any implementation following these two rules reproduces the same streams.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::surface::Domain;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::seed_from_u64(seed) }
    }

    /// Independent stream for a labelled sub-task, e.g. one surface in one suite.
    pub fn derived(seed: u64, stream: u64) -> Self {
        let mut mixer = SplitMix64::seed_from_u64(stream);
        Self::new(seed ^ mixer.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform point of a rectangle.
    pub fn point(&mut self, d: &Domain) -> (f64, f64) {
        let u = self.uniform(d.u0, d.u1);
        let v = self.uniform(d.v0, d.v1);
        (u, v)
    }
}
