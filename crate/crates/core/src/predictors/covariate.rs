use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use super::{average_over_tails, finish_binary_mean, PlayoutConfig};
use crate::error::{Error, Result};
use crate::forecast::Forecast;
use crate::potential::CovariatePotential;
use crate::random::{derive_seed, stream_rng, Stream, StreamRng};
use crate::sequence::{Alphabet, Outcome};

type Generator<X> = dyn Fn(&mut StreamRng) -> X + Send + Sync;

/// Where fresh covariates come from.
pub enum CovariateSource<X> {
    /// An i.i.d. generator.
    Iid(Arc<Generator<X>>),
    /// A finite unlabeled pool.
    Pool { values: Vec<X>, replacement: bool },
}

impl<X> Clone for CovariateSource<X>
where
    X: Clone,
{
    fn clone(&self) -> Self {
        match self {
            CovariateSource::Iid(g) => CovariateSource::Iid(g.clone()),
            CovariateSource::Pool {
                values,
                replacement,
            } => CovariateSource::Pool {
                values: values.clone(),
                replacement: *replacement,
            },
        }
    }
}

/// A seeded source of covariates. Each call is identified by an index and
/// is deterministic in `(seed, call_index)`.
#[derive(Clone)]
pub struct CovariateSampler<X> {
    source: CovariateSource<X>,
    seed: u64,
}

impl<X: Clone> CovariateSampler<X> {
    pub fn iid<F>(seed: u64, generator: F) -> Self
    where
        F: Fn(&mut StreamRng) -> X + Send + Sync + 'static,
    {
        Self {
            source: CovariateSource::Iid(Arc::new(generator)),
            seed,
        }
    }

    pub fn pool(seed: u64, values: Vec<X>, replacement: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("covariate pool is empty".into()));
        }
        Ok(Self {
            source: CovariateSource::Pool {
                values,
                replacement,
            },
            seed,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws `count` covariates for call `call_index`.
    pub fn draw(&self, call_index: u64, count: usize) -> Result<Vec<X>> {
        let mut rng = stream_rng(self.seed, call_index, Stream::Covariate);
        match &self.source {
            CovariateSource::Iid(generator) => {
                Ok((0..count).map(|_| generator(&mut rng)).collect())
            }
            CovariateSource::Pool {
                values,
                replacement: true,
            } => Ok((0..count)
                .map(|_| values[rng.random_range(0..values.len())].clone())
                .collect()),
            CovariateSource::Pool {
                values,
                replacement: false,
            } => {
                if count > values.len() {
                    return Err(Error::SamplerExhausted {
                        requested: count,
                        available: values.len(),
                    });
                }
                Ok(sample(&mut rng, values.len(), count)
                    .into_iter()
                    .map(|i| values[i].clone())
                    .collect())
            }
        }
    }
}

impl<X> fmt::Debug for CovariateSampler<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            CovariateSource::Iid(_) => "iid",
            CovariateSource::Pool { .. } => "pool",
        };
        f.debug_struct("CovariateSampler")
            .field("source", &kind)
            .field("seed", &self.seed)
            .finish()
    }
}

/// Binary forecast with side information for round `t = observed.len()`.
///
/// `observed` holds `x_1..x_t` (including the current covariate) and
/// `y_prefix` holds `y_1..y_{t-1}`. Each playout hallucinates
/// `x_{t+1..n}` from `sampler` and uniform bits `eps_{t+1..n}`; the future
/// bits use the same stream as [`super::binary_mean`], so a potential that
/// ignores `x` yields exactly the binary forecast for the same seed.
pub fn covariate_forecast<X>(
    phi: &CovariatePotential<X>,
    observed: &[X],
    y_prefix: &[Outcome],
    sampler: &CovariateSampler<X>,
    cfg: &PlayoutConfig,
) -> Result<Forecast>
where
    X: Clone + Send + Sync + 'static,
{
    let n = phi.horizon();
    let round = observed.len();
    if round == 0 || round > n {
        return Err(Error::InvalidArgument(format!(
            "need 1..={n} observed covariates, got {round}"
        )));
    }
    if y_prefix.len() + 1 != round {
        return Err(Error::LengthMismatch {
            expected: round - 1,
            got: y_prefix.len(),
        });
    }
    Alphabet::Binary.validate(y_prefix)?;

    let mut x = observed.to_vec();
    let mut y = y_prefix.to_vec();
    y.push(0);
    y.resize(n, 0);
    let t = round - 1;
    let avg = average_over_tails(Alphabet::Binary, n, round, cfg, |tail, playout| {
        let call = derive_seed(
            cfg.seed,
            ((round as u64) << 32) | playout,
            Stream::Covariate,
        );
        x.truncate(round);
        x.extend(sampler.draw(call, n - round)?);
        y[round..].copy_from_slice(tail);
        y[t] = -1;
        let minus = phi.eval(&x, &y);
        y[t] = 1;
        let plus = phi.eval(&x, &y);
        Ok(minus - plus)
    })?;
    finish_binary_mean(n as f64 * avg, cfg.clamp)
}
