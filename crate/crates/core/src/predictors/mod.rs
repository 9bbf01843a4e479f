//! Forecasting strategies derived from a potential function.
//!
//! * [`binary_mean`]: the mean `n * E[phi(.., -1, eps) - phi(.., +1, eps)]`
//!   over uniform future bits, computed exhaustively, by Monte Carlo, or from
//!   a single random playout.
//! * [`multiclass_forecast`]: the k-ary analogue, solved by [`waterfill`].
//! * [`covariate_forecast`]: the binary mean with hallucinated future covariates.
//! * [`ExactPredictor`]: tabulated conditional means for every prefix.

mod binary;
mod covariate;
mod draw;
mod exact;
mod multiclass;
mod playout;
mod waterfill;

pub use binary::{binary_mean, binary_mean_raw};
pub use covariate::{covariate_forecast, CovariateSampler, CovariateSource};
pub use draw::draw;
pub use exact::ExactPredictor;
pub use multiclass::{multiclass_forecast, multiclass_scores};
pub use playout::PlayoutPredictor;
pub use waterfill::{minimax_objective, waterfill};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::Forecast;
use crate::potential::PotentialFunction;
use crate::random::{stream_rng, Stream};
use crate::sequence::{Alphabet, Outcome};
use crate::stats::CompensatedSum;

/// How the expectation over future outcomes is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayoutMode {
    /// Average over every future tail (requires `k^(n-t) <= 10^6`).
    Exhaustive,
    /// Average over `m` independent uniform tails.
    MonteCarlo(usize),
    /// One uniform tail.
    SinglePlayout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayoutConfig {
    pub mode: PlayoutMode,
    pub seed: u64,
    /// Clip binary means to `[-1, 1]`.
    #[serde(default = "default_clamp")]
    pub clamp: bool,
}

fn default_clamp() -> bool {
    true
}

impl Default for PlayoutConfig {
    fn default() -> Self {
        Self {
            mode: PlayoutMode::Exhaustive,
            seed: 0,
            clamp: true,
        }
    }
}

impl PlayoutConfig {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self {
            mode: PlayoutMode::MonteCarlo(samples),
            seed,
            clamp: true,
        }
    }

    pub fn single_playout(seed: u64) -> Self {
        Self {
            mode: PlayoutMode::SinglePlayout,
            seed,
            clamp: true,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Checks a prefix against a potential and returns the 1-based round it forecasts.
pub(crate) fn forecast_round(phi: &PotentialFunction, prefix: &[Outcome]) -> Result<usize> {
    let n = phi.horizon();
    if prefix.len() >= n {
        return Err(Error::PrefixTooLong {
            len: prefix.len(),
            horizon: n,
        });
    }
    phi.alphabet().validate(prefix)?;
    Ok(prefix.len() + 1)
}

/// Averages `score(tail, playout_index)` over the future tails selected by
/// `cfg` for round `round` (1-based). `tail` has length `n - round`.
///
/// The random tails come from the playout stream of `(cfg.seed, round)`, so
/// every forecaster built on this helper sees the same tails for the same
/// seed and round.
pub(crate) fn average_over_tails<F>(
    alphabet: Alphabet,
    n: usize,
    round: usize,
    cfg: &PlayoutConfig,
    mut score: F,
) -> Result<f64>
where
    F: FnMut(&[Outcome], u64) -> Result<f64>,
{
    let remaining = n - round;
    let k = alphabet.size();
    let mut tail = vec![alphabet.symbol(0); remaining];
    let mut sum = CompensatedSum::default();
    let count = match cfg.mode {
        PlayoutMode::Exhaustive => {
            let count = alphabet.tail_count(remaining)?;
            for index in 0..count {
                alphabet.decode(index, &mut tail);
                sum.add(score(&tail, index as u64)?);
            }
            count
        }
        PlayoutMode::MonteCarlo(0) => {
            return Err(Error::InvalidArgument(
                "Monte Carlo playouts need m >= 1".into(),
            ))
        }
        PlayoutMode::MonteCarlo(_) | PlayoutMode::SinglePlayout => {
            let count = match cfg.mode {
                PlayoutMode::MonteCarlo(m) => m,
                _ => 1,
            };
            let mut rng = stream_rng(cfg.seed, round as u64, Stream::Playout);
            for index in 0..count {
                for s in tail.iter_mut() {
                    *s = alphabet.symbol(rng.random_range(0..k));
                }
                sum.add(score(&tail, index as u64)?);
            }
            count
        }
    };
    Ok(sum.value() / count as f64)
}

/// Applies the clamping policy to a raw binary mean.
pub(crate) fn finish_binary_mean(raw: f64, clamp: bool) -> Result<Forecast> {
    if !raw.is_finite() {
        return Err(Error::NonFiniteValue {
            value: raw,
            sequence: Vec::new(),
        });
    }
    if raw.abs() <= 1.0 {
        return Ok(Forecast::Mean(raw));
    }
    if !clamp {
        return Err(Error::StabilityViolation { value: raw });
    }
    if raw.abs() > 1.0 + 1e-9 {
        log::warn!("binary mean {raw} clipped to [-1, 1]; the potential is not stable");
    }
    Ok(Forecast::Mean(raw.clamp(-1.0, 1.0)))
}
