//! Random-number streams.
//!
//! Every worker owns exactly one [`RngStream`]; streams are never shared.
//! Streams are ChaCha8 generators keyed by `(seed, stream id)` so that the
//! same seed reproduces the same chain bit for bit on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;

pub type RngStream = ChaCha8Rng;

/// The primary stream for a seed (stream id 0).
pub fn rng_stream(seed: u64) -> RngStream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for parallel worker `worker`, derived from `seed`.
pub fn worker_stream(seed: u64, worker: usize) -> RngStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64 + 1);
    rng
}

/// `count` worker streams for a parallel sweep.
pub fn worker_streams(seed: u64, count: usize) -> Vec<RngStream> {
    (0..count).map(|w| worker_stream(seed, w)).collect()
}

/// Uniform sample in `[0, 1)`.
#[inline]
pub fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::of(rng.random::<f64>())
}

/// Uniform sample in `(0, 1]`, safe to pass to `ln`.
#[inline]
pub fn uniform_open0<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::of(1.0 - rng.random::<f64>())
}

/// Uniform sample in `[-1, 1)`.
#[inline]
pub fn symmetric<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::of(2.0 * rng.random::<f64>() - 1.0)
}

/// Standard normal sample.
#[inline]
pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::of(rng.sample::<f64, _>(StandardNormal))
}
