//! A "mind reading" machine that tracks short repeating patterns and plays
//! against a player who mostly repeats the same move.
//!
//! cargo run -p seqpred --example mind_reader

use rand::{Rng, SeedableRng};
use seqpred::philib::{finite_set_phi, pattern_family, PenaltyConstant};
use seqpred::transcript::Protocol;
use seqpred::PlayoutConfig;

fn main() -> seqpred::Result<()> {
    let n = 2000;
    let family = pattern_family(n, 3)?;
    let penalty = PenaltyConstant::finite_class_bound(n, family.len())?;
    let phi = finite_set_phi(&family, penalty)?;
    println!(
        "{} patterns of period <= 3, penalty {:.4}",
        family.len(),
        penalty.value()
    );

    let mut protocol = Protocol::new(phi, PlayoutConfig::single_playout(0), 42);
    let mut player = rand::rngs::StdRng::seed_from_u64(7);
    while !protocol.is_finished() {
        protocol.commit()?;
        let y = if player.random_bool(0.75) { 1 } else { -1 };
        protocol.reveal(y)?;
    }
    let s = protocol.transcript().summary.clone().expect("finished");
    println!(
        "machine won {} of {} rounds ({:.1}%)",
        s.rounds - s.mistakes,
        s.rounds,
        100.0 * (1.0 - s.mistakes as f64 / s.rounds as f64)
    );
    println!(
        "expected error rate {:.4} <= guarantee {:.4}",
        s.mu_hat, s.phi
    );
    Ok(())
}
