//! Portable 64-bit linear congruential generator for reproducible random grids.

use std::f64::consts::{PI, TAU};

use crate::params::{IntegrandSpec, UpperLimit};
use num_complex::Complex64;

pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// A valid real spec: n ∈ [0.5, 4.5), p/n ∈ [−0.95, 0.95),
    /// θ ∈ [0.05, 2π − 0.05), ζ ∈ [0, π), upper limit 1.
    pub fn random_spec(&mut self) -> IntegrandSpec {
        let n = self.uniform(0.5, 4.5);
        let b = self.uniform(-0.95, 0.95);
        let theta = self.uniform(0.05, TAU - 0.05);
        let zeta = self.uniform(0.0, PI);
        IntegrandSpec::new(n, Complex64::new(b * n, 0.0), theta, zeta, UpperLimit::One)
            .expect("ranges are valid by construction")
    }
}

/// `count` specs from [`Lcg::random_spec`] starting at `seed`.
pub fn random_specs(count: usize, seed: u64) -> Vec<IntegrandSpec> {
    let mut g = Lcg::new(seed);
    (0..count).map(|_| g.random_spec()).collect()
}
