//! Seeded random stream.
//!
//! The default generator is ChaCha12 (`rand_chacha::ChaCha12Rng`) seeded
//! through `SeedableRng::seed_from_u64`. Every draw is one `u64`; uniform
//! reals take its top 53 bits. Any other [`RngCore`] implementation can be
//! plugged in as the entropy source, for example hardware randomness or a
//! scripted sequence in tests.
//!
//! Independent substreams for ensemble trials are derived with
//! [`split_seed`], a SplitMix64 chain over the base seed and the indices.

use alloc::vec::Vec;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// A counted stream of random draws over an entropy source.
#[derive(Debug, Clone)]
pub struct RandomStream<R = ChaCha12Rng> {
    source: R,
    draws: u64,
}

impl RandomStream<ChaCha12Rng> {
    /// Default generator seeded from a 64-bit integer.
    pub fn from_seed(seed: u64) -> Self {
        RandomStream::new(ChaCha12Rng::seed_from_u64(seed))
    }
}

impl<R: RngCore> RandomStream<R> {
    /// Wraps an arbitrary entropy source.
    pub fn new(source: R) -> Self {
        RandomStream { source, draws: 0 }
    }

    /// Number of draws taken so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Raw 64-bit draw.
    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.source.next_u64()
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    /// Uniform in `(0, 1]` with 53-bit resolution.
    pub fn uniform_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * TWO_POW_M53
    }

    /// Consumes the stream, returning the source.
    pub fn into_inner(self) -> R {
        self.source
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a substream seed from a base seed and a path of indices,
/// e.g. `split_seed(base, &[tau_index, trial])`.
///
/// Each index is folded in with one SplitMix64 round, so distinct paths give
/// unrelated seeds and the result does not depend on evaluation order.
pub fn split_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(base), |h, &i| splitmix64(h ^ splitmix64(i.wrapping_add(1))))
}

/// Entropy source replaying a fixed list of `u64` values, then repeating the
/// last one. Useful to force specific collapse times and outcomes.
#[derive(Debug, Clone)]
pub struct Scripted {
    values: Vec<u64>,
    pos: usize,
}

impl Scripted {
    /// Source yielding `values` in order.
    pub fn new(values: Vec<u64>) -> Self {
        assert!(!values.is_empty(), "scripted source needs at least one value");
        Scripted { values, pos: 0 }
    }

    /// The raw draw whose [`RandomStream::uniform`] value is the largest
    /// representable number not above `u` (for `u` in `[0, 1)`).
    pub fn raw_for_uniform(u: f64) -> u64 {
        assert!((0.0..1.0).contains(&u));
        ((u / TWO_POW_M53) as u64) << 11
    }

    /// The raw draw mapping to `u` (in `(0, 1]`) under
    /// [`RandomStream::uniform_open_closed`], rounded down.
    pub fn raw_for_open_closed(u: f64) -> u64 {
        assert!(u > 0.0 && u <= 1.0);
        (((u / TWO_POW_M53) as u64).max(1) - 1) << 11
    }
}

impl RngCore for Scripted {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let v = self.values[self.pos.min(self.values.len() - 1)];
        self.pos += 1;
        v
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
