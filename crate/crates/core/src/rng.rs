//! Reproducible random streams.
//!
//! The generator is SplitMix64: a 64-bit counter advanced by the golden-ratio
//! increment `0x9E3779B97F4A7C15`, followed by the standard finalizer
//!
//! ```text
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! with wrapping arithmetic. Uniform doubles take the top 53 bits:
//! `(z >> 11) * 2^-53` in `[0, 1)`. Standard normals come from Box-Muller in
//! pairs, `u1 = 1 - uniform()`, `u2 = uniform()`,
//! `r = sqrt(-2 ln u1)`, first `r cos(2 pi u2)`, then `r sin(2 pi u2)`.
//! A standard complex Gaussian is `(g1 + i g2) / sqrt(2)`, so `E|z|^2 = 1`.
//!
//! Any language reproducing these steps reproduces the same streams.

use num_complex::Complex64;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    /// Stream keyed by several words, e.g. `(seed, family, n)`. Each word is
    /// folded in through one finalizer round so that nearby keys decorrelate.
    pub fn from_key(words: &[u64]) -> Self {
        let mut acc = 0u64;
        for &w in words {
            acc = mix(acc ^ w.wrapping_add(GOLDEN_GAMMA));
        }
        Self::new(acc)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare_normal = Some(r * s);
        r * c
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
