//! Sharded Monte Carlo means with jackknife standard errors.
//!
//! A run of `N` draws is cut into shards of [`SHARD_SIZE`] draws; shard `k`
//! owns the stream seeded with `seed + k`. The shard layout depends only on
//! `N`, so estimates are bit-identical across thread counts and across
//! sequential and parallel execution.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exec::{self, Execution};

pub const SHARD_SIZE: usize = 8192;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monte Carlo mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: Complex64,
    pub stderr: f64,
}

impl Estimate {
    /// `|mean - exact| ≤ sigmas · stderr`
    pub fn within(&self, exact: Complex64, sigmas: f64) -> bool {
        (self.mean - exact).norm() <= sigmas * self.stderr
    }
}

#[derive(Clone)]
struct Moments {
    count: usize,
    mean: Vec<Complex64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(width: usize) -> Self {
        Self { count: 0, mean: vec![Complex64::default(); width], m2: vec![0.0; width] }
    }

    fn push(&mut self, x: &[Complex64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *s += (delta.conj() * (v - *m)).re;
        }
    }

    // Chan et al. pairwise update.
    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * (nb / n);
            self.m2[i] += other.m2[i] + delta.norm_sqr() * na * nb / n;
        }
        self.count += other.count;
    }
}

/// Estimates the means of `width` complex statistics.
///
/// `draw` fills one joint sample of the statistics from the given stream.
/// The standard error is the delete-one jackknife estimate, which for a
/// sample mean reduces to `sqrt(Σ|x_i − x̄|² / (N(N−1)))`.
pub fn estimate_means<F>(samples: usize, seed: u64, width: usize, exec: Execution, draw: F) -> Vec<Estimate>
where
    F: Fn(&mut Rng, &mut [Complex64]) + Sync + Send,
{
    assert!(samples >= 2, "at least two samples are needed for a standard error");
    let shards = samples.div_ceil(SHARD_SIZE);
    let partial = exec::map_range(exec, shards, |k| {
        let mut rng = rng_from_seed(seed.wrapping_add(k as u64));
        let len = SHARD_SIZE.min(samples - k * SHARD_SIZE);
        let mut moments = Moments::new(width);
        let mut buf = vec![Complex64::default(); width];
        for _ in 0..len {
            draw(&mut rng, &mut buf);
            moments.push(&buf);
        }
        moments
    });
    let mut total = Moments::new(width);
    for m in &partial {
        total.merge(m);
    }
    let n = total.count as f64;
    total
        .mean
        .iter()
        .zip(&total.m2)
        .map(|(&mean, &m2)| Estimate { mean, stderr: (m2 / (n * (n - 1.0))).sqrt() })
        .collect()
}
