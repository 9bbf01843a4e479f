//! Prediction with side information: Nature labels uniform covariates with
//! one of four threshold classifiers, and the forecaster hallucinates the
//! covariates it has not seen yet.
//!
//! cargo run -p seqpred --example covariates

use seqpred::oracle::{covariate_bound_check, uniform_unit};
use seqpred::philib::{class_rademacher, projection_phi, threshold, FunctionClass};
use seqpred::predictors::CovariateSampler;
use seqpred::{MonteCarlo, PlayoutConfig};

fn main() -> seqpred::Result<()> {
    let n = 50;
    let class = FunctionClass::new([0.2, 0.4, 0.6, 0.8].map(threshold).to_vec())?;
    let penalty = class_rademacher(&class, n, uniform_unit, MonteCarlo::new(4000, 1))?;
    let phi = projection_phi(&class, n, penalty)?;
    println!(
        "penalty {:.4} +/- {:.4}",
        penalty.value(),
        penalty.half_width()
    );

    let truth = threshold(0.6);
    let sampler = CovariateSampler::iid(5, uniform_unit);
    let r = covariate_bound_check(
        &phi,
        &sampler,
        move |_, x, _| truth(x),
        PlayoutConfig::single_playout(0),
        2000,
        9,
    )?;
    println!(
        "mistake rate {:.4}, E phi {:.4}, within bound: {}",
        r.mean_mistakes, r.mean_phi, r.passed
    );
    Ok(())
}
