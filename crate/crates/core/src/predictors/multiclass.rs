use super::{average_over_tails, forecast_round, waterfill, PlayoutConfig};
use crate::error::{Error, Result};
use crate::forecast::Forecast;
use crate::potential::PotentialFunction;
use crate::sequence::Outcome;

/// Scores `psi(j) = n * E phi(prefix, j, u)` for every label, with one set of
/// future tails shared across labels.
pub fn multiclass_scores(
    phi: &PotentialFunction,
    prefix: &[Outcome],
    cfg: &PlayoutConfig,
) -> Result<Vec<f64>> {
    let alphabet = phi.alphabet();
    if alphabet.is_binary() {
        return Err(Error::AlphabetMismatch {
            expected: "{1..k}".into(),
            found: alphabet.to_string(),
        });
    }
    let round = forecast_round(phi, prefix)?;
    let n = phi.horizon();
    let k = alphabet.size();
    let t = round - 1;
    let mut buf = prefix.to_vec();
    buf.resize(n, alphabet.symbol(0));
    let mut psi = Vec::with_capacity(k);
    for j in 0..k {
        buf[t] = alphabet.symbol(j);
        let avg = average_over_tails(alphabet, n, round, cfg, |tail, _| {
            buf[round..].copy_from_slice(tail);
            Ok(phi.eval(&buf))
        })?;
        psi.push(n as f64 * avg);
    }
    Ok(psi)
}

/// k-ary forecast for round `prefix.len() + 1`: the simplex point minimizing
/// `max_j { -q_j - n E phi(prefix, j, u) }`, via water-filling on `-psi`.
pub fn multiclass_forecast(
    phi: &PotentialFunction,
    prefix: &[Outcome],
    cfg: &PlayoutConfig,
) -> Result<Forecast> {
    let psi = multiclass_scores(phi, prefix, cfg)?;
    let neg: Vec<f64> = psi.iter().map(|p| -p).collect();
    Ok(Forecast::Distribution(waterfill(&neg)?))
}
