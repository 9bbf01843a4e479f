//! Constructors for achievable potential functions and the Rademacher
//! estimators that calibrate their penalties.

mod families;
mod projection;
mod rademacher;
mod sets;

pub use families::{ball_family, pattern_family};
pub use projection::{
    class_rademacher, projection_phi, sequential_rademacher, threshold, Classifier, DyadicTree,
    FunctionClass,
};
pub use rademacher::{rademacher_mc, RademacherMode};
pub use sets::{finite_set_phi, FiniteVertexSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::PotentialFunction;
use crate::sequence::Alphabet;

/// Default constant in the aggregation penalty `sqrt(c ln N / n)`.
pub const DEFAULT_AGGREGATION_C: f64 = 0.5;

/// Default constant `C` of the imbalance potential.
pub const DEFAULT_IMBALANCE_C: f64 = 0.5;

/// Where a penalty value came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyProvenance {
    Analytic,
    MonteCarlo {
        samples: usize,
        seed: u64,
        half_width: f64,
    },
    Exhaustive,
}

/// A nonnegative additive penalty together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConstant {
    value: f64,
    provenance: PenaltyProvenance,
}

impl PenaltyConstant {
    pub fn analytic(value: f64) -> Result<Self> {
        Self::with_provenance(value, PenaltyProvenance::Analytic)
    }

    pub fn zero() -> Self {
        Self {
            value: 0.0,
            provenance: PenaltyProvenance::Analytic,
        }
    }

    pub(crate) fn with_provenance(value: f64, provenance: PenaltyProvenance) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "penalty must be finite and >= 0, got {value}"
            )));
        }
        Ok(Self { value, provenance })
    }

    /// Finite-class bound `sqrt(2 ln N) / (2 sqrt(n))` on the Rademacher
    /// average of `N` vectors in `{-1,+1}^n`.
    pub fn finite_class_bound(n: usize, size: usize) -> Result<Self> {
        if n == 0 || size == 0 {
            return Err(Error::InvalidArgument(
                "finite-class bound needs n, N >= 1".into(),
            ));
        }
        Self::analytic((2.0 * (size as f64).ln()).sqrt() / (2.0 * (n as f64).sqrt()))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn provenance(&self) -> PenaltyProvenance {
        self.provenance
    }

    /// Half-width of the estimate (zero unless Monte Carlo).
    pub fn half_width(&self) -> f64 {
        match self.provenance {
            PenaltyProvenance::MonteCarlo { half_width, .. } => half_width,
            _ => 0.0,
        }
    }
}

/// `phi(y) = min{ybar, 1 - ybar} + C / sqrt(n)`, with `ybar` the fraction
/// of `+1` outcomes.
pub fn imbalance_phi(n: usize, c: f64) -> Result<PotentialFunction> {
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "C must be finite and >= 0, got {c}"
        )));
    }
    let bonus = c / (n as f64).sqrt();
    PotentialFunction::new(n, Alphabet::Binary, move |y| {
        let plus = y.iter().filter(|&&v| v == 1).count() as f64 / n as f64;
        plus.min(1.0 - plus) + bonus
    })
}

/// `sqrt(c ln N / n)`.
pub fn aggregation_penalty(n: usize, count: usize, c: f64) -> f64 {
    (c * (count as f64).ln() / n as f64).sqrt()
}

/// Best-of-all aggregate `phi(y) = min_j phi_j(y) + sqrt(c ln N / n)`.
pub fn aggregate_phi(phis: &[PotentialFunction], c: f64) -> Result<PotentialFunction> {
    let first = phis
        .first()
        .ok_or_else(|| Error::InvalidArgument("aggregation needs at least one potential".into()))?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "aggregation constant must be > 0, got {c}"
        )));
    }
    let (n, alphabet) = (first.horizon(), first.alphabet());
    if let Some(bad) = phis
        .iter()
        .find(|p| p.horizon() != n || p.alphabet() != alphabet)
    {
        return Err(Error::InvalidArgument(format!(
            "mismatched potentials: ({n}, {alphabet}) vs ({}, {})",
            bad.horizon(),
            bad.alphabet()
        )));
    }
    let penalty = aggregation_penalty(n, phis.len(), c);
    let phis = phis.to_vec();
    PotentialFunction::new(n, alphabet, move |y| {
        phis.iter().map(|p| p.eval(y)).fold(f64::INFINITY, f64::min) + penalty
    })
}
