//! Forecasts, forecasters, and closed-form expected mistakes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Outcome};

/// Tolerance on the sum of a k-ary forecast.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// A randomized forecast for one round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Forecast {
    /// Mean of a distribution on `{-1, +1}`.
    Mean(f64),
    /// Probability of each label `1..=k` (index `j` holds label `j + 1`).
    Distribution(Vec<f64>),
}

impl Forecast {
    pub fn mean(q: f64) -> Result<Self> {
        let f = Forecast::Mean(q);
        f.validate()?;
        Ok(f)
    }

    pub fn distribution(p: Vec<f64>) -> Result<Self> {
        let f = Forecast::Distribution(p);
        f.validate()?;
        Ok(f)
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        match alphabet {
            Alphabet::Binary => Forecast::Mean(0.0),
            Alphabet::Labels(k) => Forecast::Distribution(vec![1.0 / k as f64; k as usize]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Forecast::Mean(q) => {
                if !q.is_finite() || q.abs() > 1.0 {
                    return Err(Error::InvalidForecast(format!("mean {q} outside [-1, 1]")));
                }
            }
            Forecast::Distribution(p) => {
                if p.len() < 2 {
                    return Err(Error::InvalidForecast(
                        "distribution needs k >= 2 entries".into(),
                    ));
                }
                if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::InvalidForecast(format!(
                        "negative or non-finite entry in {p:?}"
                    )));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
                    return Err(Error::InvalidForecast(format!("entries sum to {total}")));
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Forecast::Mean(_) => Alphabet::Binary,
            Forecast::Distribution(p) => Alphabet::Labels(p.len() as u8),
        }
    }

    /// Probability that a draw from this forecast differs from `outcome`.
    pub fn mistake_probability(&self, outcome: Outcome) -> Result<f64> {
        match self {
            Forecast::Mean(q) => match outcome {
                1 | -1 => Ok((1.0 - q * outcome as f64) / 2.0),
                _ => Err(Error::InvalidOutcome {
                    value: outcome as i64,
                    alphabet: Alphabet::Binary.to_string(),
                }),
            },
            Forecast::Distribution(p) => {
                let digit = self
                    .alphabet()
                    .digit(outcome)
                    .ok_or(Error::InvalidOutcome {
                        value: outcome as i64,
                        alphabet: self.alphabet().to_string(),
                    })?;
                Ok(1.0 - p[digit])
            }
        }
    }

    /// The binary mean; for a 2-label distribution, `P(2) - P(1)`.
    pub fn binary_mean(&self) -> Option<f64> {
        match self {
            Forecast::Mean(q) => Some(*q),
            Forecast::Distribution(p) if p.len() == 2 => Some(p[1] - p[0]),
            Forecast::Distribution(_) => None,
        }
    }
}

/// A forecasting strategy: a forecast for every prefix.
pub trait Forecaster: Sync {
    fn alphabet(&self) -> Alphabet;
    fn horizon(&self) -> usize;
    /// Forecast for round `prefix.len() + 1`.
    fn forecast(&self, prefix: &[Outcome]) -> Result<Forecast>;
}

/// Adapts a closure into a [`Forecaster`].
pub struct FnForecaster<F> {
    alphabet: Alphabet,
    horizon: usize,
    f: F,
}

impl<F> FnForecaster<F>
where
    F: Fn(&[Outcome]) -> Forecast + Sync,
{
    pub fn new(alphabet: Alphabet, horizon: usize, f: F) -> Self {
        Self {
            alphabet,
            horizon,
            f,
        }
    }
}

impl<F> Forecaster for FnForecaster<F>
where
    F: Fn(&[Outcome]) -> Forecast + Sync,
{
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn forecast(&self, prefix: &[Outcome]) -> Result<Forecast> {
        Ok((self.f)(prefix))
    }
}

/// `(1/n) * sum_t P(yhat_t != y_t)`, computed in closed form from the
/// forecasts on every prefix of `y`.
pub fn expected_mistakes<F: Forecaster + ?Sized>(forecaster: &F, y: &[Outcome]) -> Result<f64> {
    let n = forecaster.horizon();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    forecaster.alphabet().validate(y)?;
    let mut total = 0.0;
    for t in 0..n {
        let f = forecaster.forecast(&y[..t])?;
        f.validate()?;
        total += f.mistake_probability(y[t])?;
    }
    Ok(total / n as f64)
}
