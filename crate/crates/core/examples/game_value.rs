//! The value of the prediction game by backward induction, compared with
//! its closed form `(1 - 1/k) - E phi`.
//!
//! cargo run -p seqpred --example game_value

use seqpred::oracle::game_value;
use seqpred::philib::imbalance_phi;
use seqpred::{Alphabet, PotentialFunction};

fn main() -> seqpred::Result<()> {
    let r = game_value(&imbalance_phi(8, 0.5)?)?;
    println!(
        "imbalance, n = 8: Rel_0 = {:.6}, closed form {:.6}",
        r.rel0, r.expected
    );

    for k in [2, 3, 4] {
        let a = if k == 2 {
            Alphabet::Binary
        } else {
            Alphabet::Labels(k)
        };
        let phi = PotentialFunction::new(5, a, |y| {
            let distinct = y.windows(2).filter(|w| w[0] != w[1]).count() as f64;
            0.6 + 0.02 * distinct
        })?;
        let r = game_value(&phi)?;
        println!(
            "k = {k}: Rel_0 = {:+.6}, (1 - 1/k) - E phi = {:+.6}, gap {:.1e}",
            r.rel0, r.expected, r.identity_gap
        );
    }
    Ok(())
}
