use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PenaltyConstant, PenaltyProvenance};
use crate::error::{Error, Result};
use crate::random::rademacher;
use crate::sequence::{Alphabet, Outcome};
use crate::stats::{CompensatedSum, MonteCarlo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RademacherMode {
    /// Enumerate all `2^n` sign vectors (`n <= 20`).
    Exhaustive,
    MonteCarlo(MonteCarlo),
}

const CHUNK: usize = 1 << 12;

/// Rademacher average `(1/(2n)) E max_{w in F} <eps, w>`, given an oracle for
/// `eps -> max_{w in F} <eps, w>`.
///
/// Monte Carlo estimates below zero are floored at zero; the half-width is
/// carried in the provenance.
pub fn rademacher_mc<F>(max_evaluator: F, n: usize, mode: RademacherMode) -> Result<PenaltyConstant>
where
    F: Fn(&[Outcome]) -> f64 + Sync,
{
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    let scale = 1.0 / (2.0 * n as f64);
    match mode {
        RademacherMode::Exhaustive => {
            let count = Alphabet::Binary.exhaustive_count(n)?;
            let chunks: Vec<CompensatedSum> = (0..count.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut eps = vec![0; n];
                    let mut s = CompensatedSum::default();
                    for index in c * CHUNK..((c + 1) * CHUNK).min(count) {
                        Alphabet::Binary.decode(index, &mut eps);
                        s.add(max_evaluator(&eps));
                    }
                    s
                })
                .collect();
            let mut total = CompensatedSum::default();
            for c in &chunks {
                total.add(c.value());
            }
            let value = scale * total.value() / count as f64;
            PenaltyConstant::with_provenance(value.max(0.0), PenaltyProvenance::Exhaustive)
        }
        RademacherMode::MonteCarlo(plan) => {
            let est = plan.run(|rng| {
                let eps: Vec<Outcome> = (0..n).map(|_| rademacher(rng)).collect();
                max_evaluator(&eps)
            })?;
            if !est.mean.is_finite() {
                return Err(Error::NonFiniteValue {
                    value: est.mean,
                    sequence: Vec::new(),
                });
            }
            PenaltyConstant::with_provenance(
                (scale * est.mean).max(0.0),
                PenaltyProvenance::MonteCarlo {
                    samples: plan.samples,
                    seed: plan.seed,
                    half_width: scale * est.half_width,
                },
            )
        }
    }
}
