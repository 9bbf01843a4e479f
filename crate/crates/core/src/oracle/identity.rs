use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::forecast::{Forecast, Forecaster};
use crate::random::{derive_seed, stream_rng, Stream};
use crate::sequence::{Alphabet, Outcome};
use crate::stats::CompensatedSum;

/// Expected mistake rate of `forecaster` on every sequence, in enumeration
/// order. Each prefix is forecast once.
pub fn mistakes_all<F: Forecaster + ?Sized>(forecaster: &F) -> Result<Vec<f64>> {
    let alphabet = forecaster.alphabet();
    let n = forecaster.horizon();
    alphabet.exhaustive_count(n)?;
    let k = alphabet.size();
    let mut prefix = vec![alphabet.symbol(0); n];
    let mut loss = vec![0.0];
    for t in 0..n {
        let mut next = vec![0.0; loss.len() * k];
        for (index, &so_far) in loss.iter().enumerate() {
            alphabet.decode(index, &mut prefix[..t]);
            let f = forecaster.forecast(&prefix[..t])?;
            f.validate()?;
            for d in 0..k {
                next[index * k + d] = so_far + f.mistake_probability(alphabet.symbol(d))?;
            }
        }
        loss = next;
    }
    Ok(loss.into_iter().map(|l| l / n as f64).collect())
}

/// Average of the expected mistake rate over all `k^n` sequences.
pub fn average_error_identity<F: Forecaster + ?Sized>(forecaster: &F) -> Result<f64> {
    let all = mistakes_all(forecaster)?;
    let total: CompensatedSum = all.iter().copied().collect();
    Ok(total.value() / all.len() as f64)
}

/// A forecaster whose forecast on each prefix is an arbitrary but fixed
/// random point, reproducible from `(seed, index)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RandomForecaster {
    alphabet: Alphabet,
    horizon: usize,
    seed: u64,
}

impl RandomForecaster {
    pub fn new(alphabet: Alphabet, horizon: usize, seed: u64) -> Self {
        Self {
            alphabet,
            horizon,
            seed,
        }
    }
}

impl Forecaster for RandomForecaster {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn forecast(&self, prefix: &[Outcome]) -> Result<Forecast> {
        let key = ((prefix.len() as u64) << 40) ^ self.alphabet.encode(prefix) as u64;
        let mut rng = stream_rng(
            derive_seed(self.seed, key, Stream::Sample),
            0,
            Stream::Sample,
        );
        match self.alphabet {
            Alphabet::Binary => Forecast::mean(rng.random_range(-1.0..=1.0)),
            Alphabet::Labels(k) => {
                let raw: Vec<f64> = (0..k)
                    .map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln())
                    .collect();
                let total: f64 = raw.iter().sum();
                let mut p: Vec<f64> = raw.iter().map(|v| v / total).collect();
                let drift = 1.0 - p.iter().sum::<f64>();
                p[0] = (p[0] + drift).max(0.0);
                Forecast::distribution(p)
            }
        }
    }
}
