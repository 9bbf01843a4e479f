//! Summation and Monte Carlo estimates with 3-sigma half-widths.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{stream_rng, Stream, StreamRng};

/// Multiplier on the standard error used by every confidence half-width.
pub const CONFIDENCE_SIGMAS: f64 = 3.0;

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Running mean/variance (Welford), mergeable in a fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / total;
        self.count += other.count;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count - 1) as f64).max(0.0).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        let half_width = if self.count < 2 {
            f64::INFINITY
        } else {
            CONFIDENCE_SIGMAS * self.std_dev() / (self.count as f64).sqrt()
        };
        Estimate {
            mean: self.mean,
            half_width,
            samples: self.count,
        }
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = RunningStats::default();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// A point estimate with its 3-sigma half-width. Exact values carry a
/// half-width of zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            mean: value,
            half_width: 0.0,
            samples: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.half_width == 0.0 && self.samples == 0
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.half_width
    }
}

/// Monte Carlo sampling plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub samples: usize,
    pub seed: u64,
    /// Number of independent sample partitions. Results are reproducible
    /// for a fixed `(seed, workers)` pair.
    #[serde(default = "one")]
    pub workers: usize,
}

fn one() -> usize {
    1
}

impl MonteCarlo {
    pub fn new(samples: usize, seed: u64) -> Self {
        MonteCarlo {
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument(
                "Monte Carlo needs at least one sample".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Runs `sample` `self.samples` times, partitioned across workers with
    /// independent streams, and merges the statistics in worker order.
    pub fn run<F>(&self, sample: F) -> Result<Estimate>
    where
        F: Fn(&mut StreamRng) -> f64 + Sync,
    {
        self.validate()?;
        let workers = self.workers.min(self.samples);
        let base = self.samples / workers;
        let extra = self.samples % workers;
        let parts: Vec<RunningStats> = (0..workers)
            .into_par_iter()
            .map(|w| {
                let count = base + usize::from(w < extra);
                let mut rng = stream_rng(self.seed, w as u64, Stream::Sample);
                (0..count).map(|_| sample(&mut rng)).collect()
            })
            .collect();
        let mut total = RunningStats::default();
        for p in &parts {
            total.merge(p);
        }
        Ok(total.estimate())
    }
}
