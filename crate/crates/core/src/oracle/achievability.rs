use serde::Serialize;

use super::identity::{mistakes_all, RandomForecaster};
use crate::error::{Error, Result};
use crate::potential::PotentialFunction;
use crate::predictors::ExactPredictor;
use crate::sequence::{Alphabet, Outcome};
use crate::stability::{check_stability, CheckMode, STABILITY_TOLERANCE};

/// Tolerance for deciding that the mean of phi sits exactly at `1 - 1/k`.
pub const MEAN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `E phi = 1 - 1/k`: the exact predictor attains phi on every sequence.
    Equality,
    /// `E phi > 1 - 1/k`: the exact predictor stays below phi.
    Inequality,
}

#[derive(Clone, Debug, Serialize)]
pub struct AchievabilityReport {
    pub horizon: usize,
    pub alphabet: String,
    pub mean_phi: f64,
    pub target: f64,
    pub regime: Regime,
    pub stability_violation: f64,
    /// `max_y (mu(y) - phi(y))`.
    pub max_excess: f64,
    /// `max_y |mu(y) - phi(y)|`.
    pub max_abs_gap: f64,
    pub worst_sequence: Vec<Outcome>,
    pub sequences_checked: usize,
    pub tol: f64,
    pub passed: bool,
}

/// `1 - 1/k`.
pub fn achievable_level(alphabet: Alphabet) -> f64 {
    1.0 - 1.0 / alphabet.size() as f64
}

/// Runs the exact predictor on every sequence and compares its expected
/// mistake rate with phi.
pub fn verify_achievability(phi: &PotentialFunction, tol: f64) -> Result<AchievabilityReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    let stability = check_stability(phi, CheckMode::Exhaustive)?;
    if !stability.is_stable(STABILITY_TOLERANCE) {
        return Err(Error::Unstable {
            violation: stability.max_violation,
            budget: stability.budget,
        });
    }
    let exact = ExactPredictor::new(phi)?;
    let alphabet = phi.alphabet();
    let target = achievable_level(alphabet);
    let mean = exact.mean();
    if mean < target - MEAN_TOLERANCE {
        return Err(Error::BelowAchievable {
            mean,
            required: target,
        });
    }
    let regime = if (mean - target).abs() <= MEAN_TOLERANCE {
        Regime::Equality
    } else {
        Regime::Inequality
    };
    let values = exact.levels()[phi.horizon()].clone();
    let mu = exact.expected_mistakes_all()?;
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_abs_gap = 0.0f64;
    let mut worst = 0;
    for (i, (m, v)) in mu.iter().zip(&values).enumerate() {
        let gap = m - v;
        let key = match regime {
            Regime::Equality => gap.abs(),
            Regime::Inequality => gap,
        };
        let current = match regime {
            Regime::Equality => max_abs_gap,
            Regime::Inequality => max_excess,
        };
        if key > current {
            worst = i;
        }
        max_excess = max_excess.max(gap);
        max_abs_gap = max_abs_gap.max(gap.abs());
    }
    let mut worst_sequence = vec![0; phi.horizon()];
    alphabet.decode(worst, &mut worst_sequence);
    let passed = match regime {
        Regime::Equality => max_abs_gap <= tol,
        Regime::Inequality => max_excess <= tol,
    };
    Ok(AchievabilityReport {
        horizon: phi.horizon(),
        alphabet: alphabet.to_string(),
        mean_phi: mean,
        target,
        regime,
        stability_violation: stability.max_violation,
        max_excess,
        max_abs_gap,
        worst_sequence,
        sequences_checked: mu.len(),
        tol,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub mean_phi: f64,
    pub forecasters: usize,
    /// Forecasters for which some sequence has `mu(y) > phi(y)`.
    pub refuted: usize,
    /// Smallest, over forecasters, of `max_y (mu(y) - phi(y))`.
    pub min_worst_excess: f64,
}

impl WitnessReport {
    pub fn all_refuted(&self) -> bool {
        self.refuted == self.forecasters
    }
}

/// Samples `count` random forecasters and, for each, searches all sequences
/// for one on which its expected mistake rate exceeds phi.
pub fn impossibility_witness(
    phi: &PotentialFunction,
    count: usize,
    seed: u64,
) -> Result<WitnessReport> {
    use rayon::prelude::*;
    let values = phi.values()?;
    let (n, alphabet) = (phi.horizon(), phi.alphabet());
    let worst: Vec<f64> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let f = RandomForecaster::new(
                alphabet,
                n,
                crate::random::derive_seed(seed, i, crate::random::Stream::Run),
            );
            let mu = mistakes_all(&f)?;
            Ok(mu
                .iter()
                .zip(&values)
                .map(|(m, v)| m - v)
                .fold(f64::NEG_INFINITY, f64::max))
        })
        .collect::<Result<_>>()?;
    let mean = values
        .iter()
        .copied()
        .collect::<crate::stats::CompensatedSum>()
        .value()
        / values.len() as f64;
    Ok(WitnessReport {
        mean_phi: mean,
        forecasters: count,
        refuted: worst.iter().filter(|&&w| w > 0.0).count(),
        min_worst_excess: worst.iter().copied().fold(f64::INFINITY, f64::min),
    })
}
