//! Seedable random streams and measurement-outcome sampling.
//!
//! A [`RandomStream`] is a ChaCha8 generator keyed by a 64-bit seed and a
//! 64-bit stream id. The output depends only on `(seed, stream_id, draw
//! order)`, so trials can run on any thread in any order and still
//! reproduce bit for bit.

use crate::error::{Error, Result};
use crate::model::{outcome_pair, AmplifiedLevel, NoiseModel};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Stream with the same seed and a different id.
    pub fn split(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// One draw from `Bin(shots, p)`.
    pub fn sample_binomial(&mut self, shots: u64, p: f64) -> Result<u64> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 0.0 {
            return Ok(0);
        }
        if p == 1.0 {
            return Ok(shots);
        }
        let dist = Binomial::new(shots, p).map_err(|_| Error::InvalidProbability(p))?;
        Ok(dist.sample(&mut self.rng))
    }

    /// Number of "1" outcomes in `shots` readouts of the level-`alpha` state
    /// at the true angle.
    pub fn sample_step(
        &mut self,
        level: AmplifiedLevel,
        theta_true: f64,
        noise: &NoiseModel,
        shots: u64,
    ) -> Result<u64> {
        crate::model::check_theta(theta_true)?;
        let (p, _) = outcome_pair(level, theta_true, noise);
        self.sample_binomial(shots, p.clamp(0.0, 1.0))
    }
}
