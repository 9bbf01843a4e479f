use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::CovariatePotential;
use crate::predictors::{covariate_forecast, CovariateSampler, PlayoutConfig};
use crate::random::{derive_seed, rademacher, Stream};
use crate::sequence::Outcome;
use crate::stats::{Estimate, MonteCarlo, RunningStats};

#[derive(Clone, Debug, Serialize)]
pub struct CovariateCheckReport {
    /// Estimate of `E_{x, eps} phi(x; eps)`.
    pub uniform_mean: Estimate,
    /// Whether `uniform_mean` is consistent with `>= 1/2`.
    pub condition_holds: bool,
    pub runs: usize,
    pub mean_mistakes: f64,
    pub mean_phi: f64,
    /// Expected mistake rate minus `phi(x; y)`, per run.
    pub margin: Option<Estimate>,
    pub passed: bool,
}

/// Plays the covariate forecaster against a Nature whose outcome in round
/// `t` is `script(t, x_t, y_1..y_{t-1})`, with `x` drawn from `sampler`.
///
/// The potential is first checked to have `E phi(x; eps) >= 1/2` up to the
/// Monte Carlo half-width; when that fails nothing is played.
pub fn covariate_bound_check<X, S>(
    phi: &CovariatePotential<X>,
    sampler: &CovariateSampler<X>,
    script: S,
    cfg: PlayoutConfig,
    runs: usize,
    seed: u64,
) -> Result<CovariateCheckReport>
where
    X: Clone + Send + Sync + 'static,
    S: Fn(usize, &X, &[Outcome]) -> Outcome + Sync,
{
    if runs < 2 {
        return Err(Error::InvalidArgument(
            "covariate check needs at least 2 runs".into(),
        ));
    }
    let n = phi.horizon();
    let draw_x = |stream: Stream, r: u64| sampler.draw(derive_seed(seed, r, stream), n);

    let plan = MonteCarlo::new(runs, derive_seed(seed, 0, Stream::Sample));
    let uniform = RunningStats::from_iter(
        (0..runs as u64)
            .into_par_iter()
            .map(|r| {
                let x = draw_x(Stream::Sample, r)?;
                let mut rng = crate::random::stream_rng(plan.seed, r, Stream::Sample);
                let eps: Vec<Outcome> = (0..n).map(|_| rademacher(&mut rng)).collect();
                Ok(phi.eval(&x, &eps))
            })
            .collect::<Result<Vec<f64>>>()?,
    );
    let uniform_mean = uniform.estimate();
    let condition_holds = uniform_mean.upper() >= 0.5;
    if !condition_holds {
        return Ok(CovariateCheckReport {
            uniform_mean,
            condition_holds,
            runs,
            mean_mistakes: f64::NAN,
            mean_phi: f64::NAN,
            margin: None,
            passed: false,
        });
    }

    let results: Vec<(f64, f64)> = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let x = draw_x(Stream::Observation, r)?;
            let run_cfg = cfg.with_seed(derive_seed(seed, r, Stream::Run));
            let mut y: Vec<Outcome> = Vec::with_capacity(n);
            let mut loss = 0.0;
            for t in 1..=n {
                let q = covariate_forecast(phi, &x[..t], &y, sampler, &run_cfg)?;
                let outcome = script(t, &x[t - 1], &y);
                loss += q.mistake_probability(outcome)?;
                y.push(outcome);
            }
            let loss = loss / n as f64;
            Ok((loss, phi.eval(&x, &y)))
        })
        .collect::<Result<_>>()?;
    let margin: RunningStats = results.iter().map(|(l, p)| l - p).collect();
    let margin = margin.estimate();
    let mean_mistakes = results.iter().map(|r| r.0).sum::<f64>() / runs as f64;
    let mean_phi = results.iter().map(|r| r.1).sum::<f64>() / runs as f64;
    Ok(CovariateCheckReport {
        uniform_mean,
        condition_holds,
        runs,
        mean_mistakes,
        mean_phi,
        passed: margin.mean <= margin.half_width + 1e-12,
        margin: Some(margin),
    })
}

/// Uniform covariates on `[0, 1)`.
pub fn uniform_unit(rng: &mut crate::random::StreamRng) -> f64 {
    rng.random()
}
