use super::{average_over_tails, finish_binary_mean, forecast_round, PlayoutConfig};
use crate::error::{Error, Result};
use crate::forecast::Forecast;
use crate::potential::PotentialFunction;
use crate::sequence::{Alphabet, Outcome};

/// Unclipped binary mean `n * E[phi(prefix, -1, eps) - phi(prefix, +1, eps)]`.
pub fn binary_mean_raw(
    phi: &PotentialFunction,
    prefix: &[Outcome],
    cfg: &PlayoutConfig,
) -> Result<f64> {
    if !phi.alphabet().is_binary() {
        return Err(Error::AlphabetMismatch {
            expected: Alphabet::Binary.to_string(),
            found: phi.alphabet().to_string(),
        });
    }
    let round = forecast_round(phi, prefix)?;
    let n = phi.horizon();
    let mut buf = Vec::with_capacity(n);
    buf.extend_from_slice(prefix);
    buf.push(0);
    buf.resize(n, 0);
    let t = round - 1;
    let avg = average_over_tails(Alphabet::Binary, n, round, cfg, |tail, _| {
        buf[round..].copy_from_slice(tail);
        buf[t] = -1;
        let minus = phi.eval(&buf);
        buf[t] = 1;
        let plus = phi.eval(&buf);
        Ok(minus - plus)
    })?;
    Ok(n as f64 * avg)
}

/// Binary forecast for round `prefix.len() + 1`.
///
/// With `cfg.clamp` the mean is clipped to `[-1, 1]` (a no-op for stable
/// potentials); without it an out-of-range mean is a
/// [`Error::StabilityViolation`].
pub fn binary_mean(
    phi: &PotentialFunction,
    prefix: &[Outcome],
    cfg: &PlayoutConfig,
) -> Result<Forecast> {
    finish_binary_mean(binary_mean_raw(phi, prefix, cfg)?, cfg.clamp)
}
