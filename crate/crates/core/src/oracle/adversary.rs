use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::achievability::achievable_level;
use crate::error::{Error, Result};
use crate::forecast::{Forecast, Forecaster};
use crate::potential::PotentialFunction;
use crate::predictors::{draw, ExactPredictor, PlayoutConfig, PlayoutPredictor};
use crate::random::{derive_seed, Stream};
use crate::sequence::{Alphabet, Outcome};
use crate::stability::{mean_phi, MeanMode};
use crate::stats::{Estimate, RunningStats};

/// How Nature picks outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversaryKind {
    /// A sequence fixed in advance.
    Oblivious { sequence: Vec<Outcome> },
    /// Maximizes the learner's expected loss in the current round.
    AdaptiveGreedy,
    /// Maximizes `mistakes - phi` by backward induction.
    AdaptiveOptimal,
    /// Covariate mode only; see [`super::covariate_bound_check`].
    SemiAdaptive,
}

impl AdversaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::Oblivious { .. } => "oblivious",
            AdversaryKind::AdaptiveGreedy => "adaptive_greedy",
            AdversaryKind::AdaptiveOptimal => "adaptive_optimal",
            AdversaryKind::SemiAdaptive => "semi_adaptive",
        }
    }
}

/// Which learner plays against Nature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorKind {
    Exact,
    /// Playout forecasts; each run reseeds the configuration.
    Playout {
        config: PlayoutConfig,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryReport {
    pub adversary: String,
    pub predictor: PredictorKind,
    pub horizon: usize,
    pub runs: usize,
    pub seed: u64,
    /// `E phi` under uniform outcomes, when it can be enumerated.
    pub mean_phi: Option<f64>,
    /// Average over runs of the expected mistake rate.
    pub mean_mistakes: f64,
    /// Average over runs of the mistake rate of the drawn predictions.
    pub realized_mistakes: f64,
    /// Average over runs of `phi(y)` on the realized sequence.
    pub mean_phi_realized: f64,
    /// Expected mistake rate minus `phi(y)`, with its 3-sigma half-width.
    pub margin: Estimate,
    /// Whether `margin <= 0` is guaranteed, i.e. `E phi >= 1 - 1/k`.
    pub bound_applies: bool,
    pub passed: bool,
}

const TIE_TOLERANCE: f64 = 1e-12;

fn pick(alphabet: Alphabet, scores: &[f64], last: Option<Outcome>) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..scores.len())
        .filter(|&d| scores[d] >= best - TIE_TOLERANCE)
        .collect();
    tied.iter()
        .copied()
        .find(|&d| Some(alphabet.symbol(d)) != last)
        .unwrap_or(tied[0])
}

struct Run {
    loss: f64,
    realized: f64,
    phi: f64,
}

/// Plays the full protocol `runs` times and reports the margin between the
/// learner's expected mistake rate and phi on the realized sequences.
pub fn adversary_run(
    phi: &PotentialFunction,
    predictor: PredictorKind,
    kind: &AdversaryKind,
    runs: usize,
    seed: u64,
) -> Result<AdversaryReport> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be positive".into()));
    }
    let n = phi.horizon();
    let alphabet = phi.alphabet();
    let k = alphabet.size();
    match kind {
        AdversaryKind::SemiAdaptive => {
            return Err(Error::InvalidArgument(
                "semi_adaptive Nature needs covariates; use covariate_bound_check".into(),
            ))
        }
        AdversaryKind::Oblivious { sequence } => {
            if sequence.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: sequence.len(),
                });
            }
            alphabet.validate(sequence)?;
        }
        _ => {}
    }
    let needs_table = !matches!(
        (kind, predictor),
        (
            AdversaryKind::Oblivious { .. },
            PredictorKind::Playout { .. }
        )
    );
    let exact = if needs_table {
        Some(ExactPredictor::new(phi)?)
    } else {
        None
    };

    let values = if matches!(kind, AdversaryKind::AdaptiveOptimal) {
        let exact = exact.as_ref().expect("table built");
        let mut levels: Vec<Vec<f64>> = vec![exact.levels()[n].iter().map(|v| -v).collect()];
        for t in (0..n).rev() {
            let below = levels.last().expect("nonempty");
            let mut level = Vec::with_capacity(below.len() / k);
            for index in 0..below.len() / k {
                let f = exact.forecast_by_index(t, index)?;
                let mut best = f64::NEG_INFINITY;
                for d in 0..k {
                    let v = f.mistake_probability(alphabet.symbol(d))? / n as f64
                        + below[index * k + d];
                    best = best.max(v);
                }
                level.push(best);
            }
            levels.push(level);
        }
        levels.reverse();
        Some(levels)
    } else {
        None
    };

    let play = |r: usize| -> Result<Run> {
        let run_seed = derive_seed(seed, r as u64, Stream::Run);
        let playout;
        let learner: &dyn Forecaster = match predictor {
            PredictorKind::Exact => exact.as_ref().expect("table built"),
            PredictorKind::Playout { config } => {
                playout = PlayoutPredictor::new(phi.clone(), config.with_seed(run_seed));
                &playout
            }
        };
        let mut y: Vec<Outcome> = Vec::with_capacity(n);
        let mut index = 0usize;
        let mut loss = 0.0;
        let mut wrong = 0usize;
        let mut last = None;
        for t in 0..n {
            let q: Forecast = learner.forecast(&y)?;
            let digit = match kind {
                AdversaryKind::Oblivious { sequence } => {
                    alphabet.digit(sequence[t]).expect("validated")
                }
                AdversaryKind::AdaptiveGreedy => {
                    let f = exact
                        .as_ref()
                        .expect("table built")
                        .forecast_by_index(t, index)?;
                    let scores = (0..k)
                        .map(|d| f.mistake_probability(alphabet.symbol(d)))
                        .collect::<Result<Vec<_>>>()?;
                    pick(alphabet, &scores, last)
                }
                AdversaryKind::AdaptiveOptimal => {
                    let f = exact
                        .as_ref()
                        .expect("table built")
                        .forecast_by_index(t, index)?;
                    let next = &values.as_ref().expect("values built")[t + 1];
                    let scores = (0..k)
                        .map(|d| {
                            Ok(f.mistake_probability(alphabet.symbol(d))? / n as f64
                                + next[index * k + d])
                        })
                        .collect::<Result<Vec<_>>>()?;
                    pick(alphabet, &scores, last)
                }
                AdversaryKind::SemiAdaptive => unreachable!("rejected above"),
            };
            let outcome = alphabet.symbol(digit);
            let prediction = draw(&q, run_seed, t as u64 + 1)?;
            loss += q.mistake_probability(outcome)?;
            wrong += usize::from(prediction != outcome);
            last = Some(prediction);
            index = index * k + digit;
            y.push(outcome);
        }
        Ok(Run {
            loss: loss / n as f64,
            realized: wrong as f64 / n as f64,
            phi: phi.try_eval(&y)?,
        })
    };

    let results: Vec<Run> = (0..runs).into_par_iter().map(play).collect::<Result<_>>()?;
    let mut margin = RunningStats::default();
    let (mut loss, mut realized, mut phis) = (0.0, 0.0, 0.0);
    for r in &results {
        margin.push(r.loss - r.phi);
        loss += r.loss;
        realized += r.realized;
        phis += r.phi;
    }
    let margin = if results
        .iter()
        .all(|r| r.loss - r.phi == results[0].loss - results[0].phi)
    {
        Estimate::exact(results[0].loss - results[0].phi)
    } else {
        margin.estimate()
    };
    let mean = match alphabet.exhaustive_count(n) {
        Ok(_) => Some(exact.as_ref().map_or_else(
            || mean_phi(phi, MeanMode::Exhaustive).map(|e| e.mean),
            |e| Ok(e.mean()),
        )?),
        Err(_) => None,
    };
    let bound_applies = mean.is_some_and(|m| m >= achievable_level(alphabet) - 1e-12);
    let passed = !bound_applies || margin.mean <= margin.half_width + 1e-9;
    Ok(AdversaryReport {
        adversary: kind.name().into(),
        predictor,
        horizon: n,
        runs,
        seed,
        mean_phi: mean,
        mean_mistakes: loss / runs as f64,
        realized_mistakes: realized / runs as f64,
        mean_phi_realized: phis / runs as f64,
        margin,
        bound_applies,
        passed,
    })
}
