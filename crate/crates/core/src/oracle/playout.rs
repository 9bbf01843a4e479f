use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::achievability::MEAN_TOLERANCE;
use crate::potential::PotentialFunction;
use crate::predictors::{binary_mean_raw, PlayoutConfig};
use crate::sequence::Outcome;
use crate::stats::{Estimate, MonteCarlo};

#[derive(Clone, Debug, Serialize)]
pub struct PlayoutEquivalenceReport {
    pub round: usize,
    pub exact_mean: f64,
    /// Average of single-playout means with its 3-sigma half-width.
    pub playout: Estimate,
    pub deviation: f64,
    pub passed: bool,
}

/// Compares the average of `samples` independent single-playout means with
/// the exhaustive mean at `prefix`.
pub fn playout_equivalence(
    phi: &PotentialFunction,
    prefix: &[Outcome],
    samples: usize,
    seed: u64,
) -> Result<PlayoutEquivalenceReport> {
    if !phi.alphabet().is_binary() {
        return Err(Error::InvalidArgument(
            "playout equivalence is defined for binary potentials".into(),
        ));
    }
    let exact_mean = binary_mean_raw(phi, prefix, &PlayoutConfig::exhaustive())?;
    let plan = MonteCarlo::new(samples, seed);
    plan.validate()?;
    let playout = plan.run(|rng| {
        let cfg = PlayoutConfig::single_playout(rng.random());
        binary_mean_raw(phi, prefix, &cfg).unwrap_or(f64::NAN)
    })?;
    if !playout.mean.is_finite() {
        return Err(Error::NonFiniteValue {
            value: playout.mean,
            sequence: prefix.to_vec(),
        });
    }
    let deviation = (playout.mean - exact_mean).abs();
    let passed = deviation <= playout.half_width + MEAN_TOLERANCE;
    Ok(PlayoutEquivalenceReport {
        round: prefix.len() + 1,
        exact_mean,
        playout,
        deviation,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::philib::{finite_set_phi, imbalance_phi, FiniteVertexSet, PenaltyConstant};
    use crate::sequence::Alphabet;

    #[test]
    fn singleton_has_no_spread() {
        let set = FiniteVertexSet::new(Alphabet::Binary, vec![vec![1, -1, 1, 1, -1, -1]]).unwrap();
        let phi = finite_set_phi(&set, PenaltyConstant::zero()).unwrap();
        let r = playout_equivalence(&phi, &[1, 1], 1000, 5).unwrap();
        assert!((r.exact_mean - 1.0).abs() < 1e-12);
        assert!(r.playout.half_width < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn constant_is_zero() {
        let phi = PotentialFunction::constant(5, Alphabet::Binary, 0.7).unwrap();
        let r = playout_equivalence(&phi, &[], 100, 1).unwrap();
        assert_eq!(r.exact_mean, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn imbalance_concentrates() {
        let phi = imbalance_phi(10, 0.5).unwrap();
        let r = playout_equivalence(&phi, &[1, 1, -1], 20_000, 3).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
