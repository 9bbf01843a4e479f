//! Forecasting with three labels: the scores of each label are turned into
//! a distribution by water-filling.
//!
//! cargo run -p seqpred --example multiclass_waterfill

use seqpred::oracle::{achievable_level, verify_achievability};
use seqpred::philib::{finite_set_phi, FiniteVertexSet, PenaltyConstant};
use seqpred::predictors::{minimax_objective, multiclass_forecast, waterfill};
use seqpred::{mean_phi, Alphabet, MeanMode, PlayoutConfig};

fn main() -> seqpred::Result<()> {
    let psi = [0.9, 0.2, 0.5];
    let q = waterfill(&psi)?;
    println!(
        "scores {psi:?} -> q = {q:.3?}, objective {:.4}",
        minimax_objective(&psi, &q)
    );

    let a = Alphabet::Labels(3);
    let expert = vec![1, 2, 3, 1, 2, 3];
    let set = FiniteVertexSet::new(a, vec![expert.clone()])?;
    let phi = finite_set_phi(&set, PenaltyConstant::zero())?;
    let mean = mean_phi(&phi, MeanMode::Exhaustive)?.mean;
    println!(
        "E phi = {mean:.6}, level 1 - 1/k = {:.6}",
        achievable_level(a)
    );

    let cfg = PlayoutConfig::exhaustive();
    let y = [1, 2, 1, 1, 2];
    for t in 0..y.len() {
        println!(
            "round {}: q = {:.3?}",
            t + 1,
            multiclass_forecast(&phi, &y[..t], &cfg)?
        );
    }
    let report = verify_achievability(&phi, 1e-9)?;
    println!(
        "{:?} regime over {} sequences: max |mistakes - phi| = {:.1e}",
        report.regime, report.sequences_checked, report.max_abs_gap
    );
    Ok(())
}
