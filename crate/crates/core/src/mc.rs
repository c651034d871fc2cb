//! Sharded Monte Carlo estimation.
//!
//! Samples are split over a fixed number of shards. Shard `k` draws from the
//! `k`-th child forked off the caller's stream, shards run on the rayon pool,
//! and partial moments are merged in shard order. The result therefore depends
//! only on `(seed, shards)` and not on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::RngStream;

pub const DEFAULT_SHARDS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl ErrorEstimate {
    /// Standard error of `self − other` for independent estimates.
    pub fn combined_sigma(&self, other: &ErrorEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }
}

/// Running mean and centred second moment per component.
#[derive(Debug, Clone)]
struct Moments {
    n: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(dim: usize) -> Self {
        Moments { n: 0, mean: vec![0.0; dim], m2: vec![0.0; dim] }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let delta = v - *m;
            *m += delta / n;
            *s += delta * (v - *m);
        }
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * nb / n;
            self.m2[k] += other.m2[k] + delta * delta * na * nb / n;
        }
        self.n += other.n;
    }

    fn estimates(&self) -> Vec<ErrorEstimate> {
        let n = self.n as f64;
        self.mean
            .iter()
            .zip(&self.m2)
            .map(|(&m, &s)| {
                let var = if self.n > 1 { s / (n - 1.0) } else { 0.0 };
                ErrorEstimate { value: m, std_error: (var / n).sqrt(), n_samples: self.n }
            })
            .collect()
    }
}

/// Per-shard scratch state handed to the sampling closure.
#[derive(Debug, Default)]
pub struct ShardState {
    /// Point-location hint for the shard's queries.
    pub cursor: usize,
}

/// Estimate `E[f]` componentwise, `f` writing one `dim`-vector per call.
pub fn estimate_vec<F>(
    dim: usize,
    n_samples: u64,
    shards: usize,
    rng: &mut RngStream,
    f: F,
) -> Result<Vec<ErrorEstimate>>
where
    F: Fn(&mut RngStream, &mut ShardState, &mut [f64]) -> Result<()> + Sync,
{
    let shards = shards.max(1);
    let streams: Vec<RngStream> = (0..shards).map(|_| rng.fork()).collect();
    let base = n_samples / shards as u64;
    let extra = n_samples % shards as u64;
    let parts: Vec<Result<Moments>> = streams
        .into_par_iter()
        .enumerate()
        .map(|(k, mut stream)| {
            let count = base + u64::from((k as u64) < extra);
            let mut acc = Moments::new(dim);
            let mut state = ShardState::default();
            let mut buf = vec![0.0; dim];
            for _ in 0..count {
                f(&mut stream, &mut state, &mut buf)?;
                acc.push(&buf);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Moments::new(dim);
    for part in parts {
        total.merge(&part?);
    }
    Ok(total.estimates())
}

/// Scalar version of [`estimate_vec`].
pub fn estimate<F>(n_samples: u64, shards: usize, rng: &mut RngStream, f: F) -> Result<ErrorEstimate>
where
    F: Fn(&mut RngStream, &mut ShardState) -> Result<f64> + Sync,
{
    let v = estimate_vec(1, n_samples, shards, rng, |r, s, out| {
        out[0] = f(r, s)?;
        Ok(())
    })?;
    Ok(v[0])
}
