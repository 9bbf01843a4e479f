//! Round-by-round play of a forecaster against an outcome stream, with a
//! JSONL transcript.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::{Forecast, Forecaster};
use crate::potential::PotentialFunction;
use crate::predictors::{draw, PlayoutConfig, PlayoutPredictor};
use crate::sequence::Outcome;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    pub q: Forecast,
    pub prediction: Outcome,
    pub outcome: Outcome,
    pub cum_mistakes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptSummary {
    pub rounds: usize,
    pub mistakes: usize,
    /// `phi(y)` on the completed sequence.
    pub phi: f64,
    /// Expected mistake rate `(1/n) sum_t P(yhat_t != y_t)`.
    pub mu_hat: f64,
    /// `mu_hat - phi`.
    pub margin: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
    pub summary: Option<TranscriptSummary>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a TranscriptSummary,
}

impl Transcript {
    /// One JSON object per round, then a `{"summary": ...}` line once the
    /// horizon is reached.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rounds {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        if let Some(summary) = &self.summary {
            out.push_str(
                &serde_json::to_string(&SummaryLine { summary }).expect("summary serializes"),
            );
            out.push('\n');
        }
        out
    }
}

/// The commit-then-reveal protocol for one sequence: the prediction for a
/// round is drawn and fixed before the outcome is supplied.
#[derive(Clone, Debug)]
pub struct Protocol {
    predictor: PlayoutPredictor,
    seed: u64,
    outcomes: Vec<Outcome>,
    pending: Option<(Forecast, Outcome)>,
    expected_loss: f64,
    mistakes: usize,
    transcript: Transcript,
}

impl Protocol {
    pub fn new(phi: PotentialFunction, cfg: PlayoutConfig, seed: u64) -> Self {
        Self {
            predictor: PlayoutPredictor::new(phi, cfg.with_seed(seed)),
            seed,
            outcomes: Vec::new(),
            pending: None,
            expected_loss: 0.0,
            mistakes: 0,
            transcript: Transcript::default(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.predictor.horizon()
    }

    /// The 1-based round currently open.
    pub fn round(&self) -> usize {
        self.outcomes.len() + 1
    }

    pub fn rounds_left(&self) -> usize {
        self.horizon() - self.outcomes.len()
    }

    pub fn is_finished(&self) -> bool {
        self.outcomes.len() == self.horizon()
    }

    pub fn has_pending(&self) -> bool {
        self.pending.is_some()
    }

    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// Forecasts the open round and draws the hidden prediction.
    pub fn commit(&mut self) -> Result<usize> {
        if self.is_finished() {
            return Err(Error::InvalidArgument("the horizon is exhausted".into()));
        }
        if self.pending.is_some() {
            return Err(Error::InvalidArgument(format!(
                "round {} is already committed",
                self.round()
            )));
        }
        let q = self.predictor.forecast(&self.outcomes)?;
        let prediction = draw(&q, self.seed, self.round() as u64)?;
        self.pending = Some((q, prediction));
        Ok(self.round())
    }

    /// Records the outcome of the committed round and reveals the prediction.
    pub fn reveal(&mut self, outcome: Outcome) -> Result<RoundRecord> {
        if !self.predictor.alphabet().contains(outcome) {
            return Err(Error::InvalidOutcome {
                value: outcome as i64,
                alphabet: self.predictor.alphabet().to_string(),
            });
        }
        let (q, prediction) = self.pending.take().ok_or_else(|| {
            Error::InvalidArgument("no committed prediction for this round".into())
        })?;
        self.expected_loss += q.mistake_probability(outcome)?;
        self.mistakes += usize::from(prediction != outcome);
        self.outcomes.push(outcome);
        let record = RoundRecord {
            t: self.outcomes.len(),
            q,
            prediction,
            outcome,
            cum_mistakes: self.mistakes,
        };
        self.transcript.rounds.push(record.clone());
        if self.is_finished() {
            let n = self.horizon();
            let phi = self.predictor.potential().try_eval(&self.outcomes)?;
            let mu_hat = self.expected_loss / n as f64;
            self.transcript.summary = Some(TranscriptSummary {
                rounds: n,
                mistakes: self.mistakes,
                phi,
                mu_hat,
                margin: mu_hat - phi,
            });
        }
        Ok(record)
    }
}

/// Plays `outcomes` (exactly one per round) through a fresh [`Protocol`].
pub fn replay(
    phi: &PotentialFunction,
    cfg: PlayoutConfig,
    seed: u64,
    outcomes: &[Outcome],
) -> Result<Transcript> {
    if outcomes.len() != phi.horizon() {
        return Err(Error::LengthMismatch {
            expected: phi.horizon(),
            got: outcomes.len(),
        });
    }
    let mut protocol = Protocol::new(phi.clone(), cfg, seed);
    for &y in outcomes {
        protocol.commit()?;
        protocol.reveal(y)?;
    }
    Ok(protocol.transcript.clone())
}
