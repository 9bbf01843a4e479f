//! The exact forecaster for the imbalance potential errs on each sequence
//! at most as often as the minority fraction plus a `C / sqrt(n)` slack.
//!
//! cargo run -p seqpred --example imbalance_bound

use seqpred::philib::imbalance_phi;
use seqpred::sequence::for_each_sequence;
use seqpred::{check_stability, mean_phi, Alphabet, CheckMode, ExactPredictor, MeanMode};

fn main() -> seqpred::Result<()> {
    for n in [4, 8, 12] {
        let phi = imbalance_phi(n, 0.5)?;
        let stability = check_stability(&phi, CheckMode::Exhaustive)?;
        let mean = mean_phi(&phi, MeanMode::Exhaustive)?.mean;
        let exact = ExactPredictor::new(&phi)?;
        let mistakes = exact.expected_mistakes_all()?;
        let mut worst: f64 = f64::NEG_INFINITY;
        for_each_sequence(Alphabet::Binary, n, |i, y| {
            let plus = y.iter().filter(|&&v| v == 1).count() as f64 / n as f64;
            let bound = plus.min(1.0 - plus) + 0.5 / (n as f64).sqrt();
            worst = worst.max(mistakes[i] - bound);
        });
        println!(
            "n = {n:2}: stability excess {:.1e}, E phi = {mean:.4}, max (mistakes - bound) = {worst:.2e}",
            stability.max_violation
        );
    }
    Ok(())
}
