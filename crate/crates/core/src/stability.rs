//! Stability and mean checks that gate achievability of a potential.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::PotentialFunction;
use crate::random::{stream_rng, Stream};
use crate::sequence::{Alphabet, Outcome};
use crate::stats::{CompensatedSum, Estimate, MonteCarlo};

/// How a stability check visits the discrete cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Worst excess over the budget, floored at zero.
    pub max_violation: f64,
    pub checked_mode: CheckMode,
    /// `1/n` for binary outcomes, `1/(nk)` for k-ary outcomes.
    pub budget: f64,
    /// Number of coordinate fibers examined.
    pub fibers_checked: usize,
    /// Sequence and 0-based coordinate of the worst fiber, when it exceeds the budget.
    pub worst: Option<(Vec<Outcome>, usize)>,
}

impl StabilityReport {
    pub fn is_stable(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Default slack when deciding stability from floating-point evaluations.
pub const STABILITY_TOLERANCE: f64 = 1e-12;

pub fn stability_budget(alphabet: Alphabet, n: usize) -> f64 {
    match alphabet {
        Alphabet::Binary => 1.0 / n as f64,
        Alphabet::Labels(k) => 1.0 / (n as f64 * k as f64),
    }
}

/// Excess of one coordinate fiber (values of phi as coordinate t ranges over
/// the alphabet, rest fixed) over the stability budget.
fn fiber_excess(alphabet: Alphabet, values: &[f64], budget: f64) -> f64 {
    match alphabet {
        Alphabet::Binary => (values[0] - values[1]).abs() - budget,
        Alphabet::Labels(k) => {
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = values.iter().sum::<f64>() / k as f64;
            max - mean - budget
        }
    }
}

/// Largest violation of the single-coordinate stability condition.
pub fn check_stability(phi: &PotentialFunction, mode: CheckMode) -> Result<StabilityReport> {
    let n = phi.horizon();
    let alphabet = phi.alphabet();
    let k = alphabet.size();
    let budget = stability_budget(alphabet, n);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst: Option<(Vec<Outcome>, usize)> = None;
    let mut fibers = 0usize;
    let mut fiber = vec![0.0; k];

    match mode {
        CheckMode::Exhaustive => {
            let values = phi.values()?;
            let mut seq = vec![0; n];
            for (index, _) in values.iter().enumerate() {
                alphabet.decode(index, &mut seq);
                let mut stride = 1usize;
                for t in (0..n).rev() {
                    if seq[t] == alphabet.symbol(0) {
                        for (d, slot) in fiber.iter_mut().enumerate() {
                            *slot = values[index + d * stride];
                        }
                        fibers += 1;
                        let excess = fiber_excess(alphabet, &fiber, budget);
                        if excess > worst_excess {
                            worst_excess = excess;
                            worst = Some((seq.clone(), t));
                        }
                    }
                    stride *= k;
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidArgument(
                    "sampled mode needs at least one sample".into(),
                ));
            }
            let mut rng = stream_rng(seed, 0, Stream::Sample);
            let mut seq = vec![0; n];
            for _ in 0..samples {
                for s in seq.iter_mut() {
                    *s = alphabet.symbol(rng.random_range(0..k));
                }
                let t = rng.random_range(0..n);
                for (d, slot) in fiber.iter_mut().enumerate() {
                    seq[t] = alphabet.symbol(d);
                    *slot = phi.try_eval(&seq)?;
                }
                seq[t] = alphabet.symbol(0);
                fibers += 1;
                let excess = fiber_excess(alphabet, &fiber, budget);
                if excess > worst_excess {
                    worst_excess = excess;
                    worst = Some((seq.clone(), t));
                }
            }
        }
    }

    let max_violation = worst_excess.max(0.0);
    Ok(StabilityReport {
        max_violation,
        checked_mode: mode,
        budget,
        fibers_checked: fibers,
        worst: if max_violation > 0.0 { worst } else { None },
    })
}

/// How [`mean_phi`] averages over the uniform distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMode {
    Exhaustive,
    MonteCarlo(MonteCarlo),
}

/// Mean of phi under the uniform distribution on `[k]^n`.
pub fn mean_phi(phi: &PotentialFunction, mode: MeanMode) -> Result<Estimate> {
    match mode {
        MeanMode::Exhaustive => {
            let values = phi.values()?;
            let sum: CompensatedSum = values.iter().copied().collect();
            Ok(Estimate::exact(sum.value() / values.len() as f64))
        }
        MeanMode::MonteCarlo(plan) => {
            let n = phi.horizon();
            let alphabet = phi.alphabet();
            let k = alphabet.size();
            let estimate = plan.run(|rng| {
                let y: Vec<Outcome> = (0..n)
                    .map(|_| alphabet.symbol(rng.random_range(0..k)))
                    .collect();
                phi.eval(&y)
            })?;
            if !estimate.mean.is_finite() {
                return Err(Error::NonFiniteValue {
                    value: estimate.mean,
                    sequence: Vec::new(),
                });
            }
            Ok(estimate)
        }
    }
}
