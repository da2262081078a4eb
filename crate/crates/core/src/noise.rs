//! Reproducible Brownian increments from a counter-based generator.
//!
//! Every trajectory and oscillator owns an independent stream identified by
//! `(master_seed, stream_id)`. Draws are pure functions of the stream key and
//! a running counter, so a stream can be replayed bit-exactly regardless of
//! scheduling, and step halving can refine an already-drawn increment through
//! a Brownian-bridge midpoint draw without disturbing the rest of the path.

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer. Bijective on u64.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stateless avalanche mix of a master seed and a stream index.
///
/// The algorithm is fixed: `mix64(master ^ mix64(stream * G + G))` with
/// `G = 0x9e3779b97f4a7c15` and `mix64` the SplitMix64 finalizer. For a fixed
/// master seed the map `stream_id -> seed` is a bijection, so distinct stream
/// ids can never collide.
pub fn derive_seed(master_seed: u64, stream_id: u64) -> u64 {
    mix64(master_seed ^ mix64(stream_id.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

/// One independent Brownian increment source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseStream {
    pub master_seed: u64,
    pub stream_id: u64,
    pub counter: u64,
    key: u64,
}

impl NoiseStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        NoiseStream {
            master_seed,
            stream_id,
            counter: 0,
            key: derive_seed(master_seed, stream_id),
        }
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter += 1;
        mix64(self.key.wrapping_add(c.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in the open interval (0, 1).
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal draw (Box-Muller, cosine branch; two counter ticks).
    #[inline]
    pub fn next_standard_normal(&mut self) -> f64 {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Brownian increment over a step of length `dt`.
    #[inline]
    pub fn increment(&mut self, dt: f64) -> f64 {
        self.next_standard_normal() * dt.sqrt()
    }

    /// Split a drawn increment `w_full` over `[t, t+dt]` into the two
    /// half-step increments, conditioning on the endpoint (Lévy construction:
    /// the midpoint value given the endpoints is Gaussian with standard
    /// deviation `sqrt(dt)/2`).
    #[inline]
    pub fn bridge_midpoint(&mut self, w_full: f64, dt: f64) -> (f64, f64) {
        let w1 = 0.5 * w_full + 0.5 * dt.sqrt() * self.next_standard_normal();
        (w1, w_full - w1)
    }
}
