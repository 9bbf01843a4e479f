//! Experiment configuration files and outcome streams.
//!
//! A configuration is a JSON object:
//!
//! ```json
//! {
//!   "phi": {"kind": "imbalance", "n": 10, "c": 0.5},
//!   "horizon": 10,
//!   "alphabet": 2,
//!   "predictor": {"kind": "playout", "config": {"mode": "single_playout", "seed": 0}},
//!   "adversary": {"kind": "adaptive_greedy"},
//!   "outcomes": "stream.txt",
//!   "seed": 7
//! }
//! ```
//!
//! Only `phi` is required. Relative paths (graph files, the outcome stream)
//! resolve against the directory holding the configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use seqpred::oracle::{AdversaryKind, PredictorKind};
use seqpred::{Alphabet, CovariatePotential, Outcome, PhiSpec, PlayoutConfig, PotentialFunction};

use crate::error::{HarnessError, HarnessResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub phi: PhiSpec,
    #[serde(default)]
    pub horizon: Option<usize>,
    /// Alphabet size `k`; `2` means outcomes in `{-1, +1}`.
    #[serde(default)]
    pub alphabet: Option<usize>,
    #[serde(default)]
    pub predictor: Option<PredictorKind>,
    #[serde(default)]
    pub adversary: Option<AdversaryKind>,
    #[serde(default)]
    pub outcomes: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub verify: VerifyOptions,
}

/// Sample sizes and tolerances for `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    /// Adversary and covariate runs.
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Single-playout draws compared with the exhaustive mean.
    #[serde(default = "default_playout_samples")]
    pub playout_samples: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_runs() -> usize {
    1000
}

fn default_playout_samples() -> usize {
    10_000
}

fn default_tol() -> f64 {
    1e-9
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            runs: default_runs(),
            playout_samples: default_playout_samples(),
            tol: default_tol(),
        }
    }
}

/// A built potential, with or without covariates.
#[derive(Clone, Debug)]
pub enum Potential {
    Plain(PotentialFunction),
    Covariate(CovariatePotential<f64>),
}

impl Potential {
    pub fn horizon(&self) -> usize {
        match self {
            Potential::Plain(phi) => phi.horizon(),
            Potential::Covariate(phi) => phi.horizon(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Potential::Plain(phi) => phi.alphabet(),
            Potential::Covariate(_) => Alphabet::Binary,
        }
    }
}

/// A validated configuration together with its potential.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub base: Option<PathBuf>,
    pub potential: Potential,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> HarnessResult<Self> {
        serde_json::from_str(text)
            .map_err(|e| HarnessError::config(format!("invalid configuration: {e}")))
    }

    pub fn load(path: &Path) -> HarnessResult<Experiment> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let config = Self::from_json(&text)?;
        let base = path.parent().map(Path::to_path_buf);
        config.build(base)
    }

    /// Builds the potential and checks the declared horizon, alphabet and
    /// adversary against it.
    pub fn build(self, base: Option<PathBuf>) -> HarnessResult<Experiment> {
        let potential = if self.phi.is_covariate() {
            Potential::Covariate(self.phi.build_covariate(base.as_deref())?)
        } else {
            Potential::Plain(self.phi.build(base.as_deref())?)
        };
        let n = potential.horizon();
        if let Some(h) = self.horizon {
            if h != n {
                return Err(HarnessError::config(format!(
                    "horizon {h} does not match the potential's horizon {n}"
                )));
            }
        }
        if let Some(k) = self.alphabet {
            let actual = potential.alphabet().size();
            if k != actual {
                return Err(HarnessError::config(format!(
                    "alphabet size {k} does not match the potential's alphabet size {actual}"
                )));
            }
        }
        if let Some(AdversaryKind::Oblivious { sequence }) = &self.adversary {
            if sequence.len() != n {
                return Err(HarnessError::config(format!(
                    "oblivious sequence has {} outcomes, expected {n}",
                    sequence.len()
                )));
            }
            potential.alphabet().validate(sequence)?;
        }
        Ok(Experiment {
            config: self,
            base,
            potential,
        })
    }
}

impl Experiment {
    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.base {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }

    /// The plain potential, or a configuration error for covariate specs.
    pub fn plain(&self, command: &str) -> HarnessResult<&PotentialFunction> {
        match &self.potential {
            Potential::Plain(phi) => Ok(phi),
            Potential::Covariate(_) => Err(HarnessError::config(format!(
                "`{command}` needs a potential over outcomes only; projection specs depend on covariates"
            ))),
        }
    }

    /// The playout configuration used when a transcript is produced.
    pub fn playout_config(&self) -> PlayoutConfig {
        match self.config.predictor {
            Some(PredictorKind::Playout { config }) => config,
            Some(PredictorKind::Exact) => PlayoutConfig::exhaustive(),
            None if exhaustive_feasible(self.potential.alphabet(), self.potential.horizon()) => {
                PlayoutConfig::exhaustive()
            }
            None => PlayoutConfig::single_playout(self.config.seed),
        }
    }
}

/// Whether every sequence of length `n` can be enumerated.
pub fn exhaustive_feasible(alphabet: Alphabet, n: usize) -> bool {
    alphabet.exhaustive_count(n).is_ok()
}

/// Parses an outcome stream: integers separated by whitespace or commas,
/// with `#` starting a comment that runs to the end of the line.
pub fn parse_outcomes(text: &str, alphabet: Alphabet) -> HarnessResult<Vec<Outcome>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let value: Outcome = match token {
                "+" => 1,
                "-" => -1,
                _ => token.parse().map_err(|_| {
                    HarnessError::config(format!("line {}: `{token}` is not an outcome", i + 1))
                })?,
            };
            if !alphabet.contains(value) {
                return Err(HarnessError::config(format!(
                    "line {}: outcome {value} is outside the alphabet {alphabet}",
                    i + 1
                )));
            }
            out.push(value);
        }
    }
    Ok(out)
}

pub fn read_outcomes(path: &Path, alphabet: Alphabet) -> HarnessResult<Vec<Outcome>> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_outcomes(&text, alphabet)
}
