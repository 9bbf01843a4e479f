use rand::Rng;

use crate::error::Result;
use crate::forecast::Forecast;
use crate::random::{stream_rng, Stream};
use crate::sequence::Outcome;

/// Draws a prediction from `forecast`, deterministically in `(seed, round)`.
///
/// Binary: `+1` with probability `(1 + q) / 2`. k-ary: a categorical draw
/// returning a label in `1..=k`.
pub fn draw(forecast: &Forecast, seed: u64, round: u64) -> Result<Outcome> {
    forecast.validate()?;
    let mut rng = stream_rng(seed, round, Stream::Draw);
    let u: f64 = rng.random();
    Ok(match forecast {
        Forecast::Mean(q) => {
            if u < (1.0 + q) / 2.0 {
                1
            } else {
                -1
            }
        }
        Forecast::Distribution(p) => {
            let mut acc = 0.0;
            let mut label = p.len();
            for (j, pj) in p.iter().enumerate() {
                acc += pj;
                if u < acc {
                    label = j + 1;
                    break;
                }
            }
            // Rounding can leave u above the last partial sum; fall back to
            // the last label with positive mass.
            if label == p.len() {
                label = p.iter().rposition(|&x| x > 0.0).unwrap_or(p.len() - 1) + 1;
            }
            label as Outcome
        }
    })
}
