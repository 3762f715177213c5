//! Direct Monte Carlo estimate of the double-sphere average of `|aᵀ K b|`.
//!
//! Samples are split into fixed-size shards. Shard `i` draws from a ChaCha8
//! stream selected by `(seed, i)`, and shard statistics are merged in index
//! order, so the estimate is identical for any number of worker threads.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::CorrelationMatrix3;

pub const SHARD_SIZE: usize = 1 << 16;

/// Identity of the sample generator, recorded in output metadata.
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng seed_from_u64(seed), stream = shard index, 65536 samples/shard, normalised StandardNormal triples";

/// Uniform point on the unit sphere: a normalised triple of standard normals.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = v.norm();
        if n > 0.0 {
            return v / n;
        }
    }
}

/// Count, mean and sum of squared deviations of a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Moments {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    /// Standard error of the mean; zero for fewer than two samples.
    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
    }
}

pub(crate) fn sample_abs_correlation(k: &CorrelationMatrix3, samples: usize, seed: u64) -> Moments {
    let k = *k.matrix();
    let shards = samples.div_ceil(SHARD_SIZE);
    let parts: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let n = SHARD_SIZE.min(samples - shard * SHARD_SIZE);
            let mut m = Moments::default();
            for _ in 0..n {
                let a = unit_vector(&mut rng);
                let b = unit_vector(&mut rng);
                m.push(a.dot(&(k * b)).abs());
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}
