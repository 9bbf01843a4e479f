use serde::Serialize;

use super::achievability::achievable_level;
use crate::error::Result;
use crate::potential::PotentialFunction;
use crate::stats::CompensatedSum;

/// Largest horizon for which the per-level tables are kept in the report.
pub const MAX_TABLE_HORIZON: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct GameValueReport {
    pub horizon: usize,
    pub alphabet: String,
    pub rel0: f64,
    pub mean_phi: f64,
    /// `(1 - 1/k) - E phi`.
    pub expected: f64,
    /// `|rel0 - expected|`.
    pub identity_gap: f64,
    /// Largest deviation of any table entry from the closed form
    /// `-E[phi | prefix] + (n - t)/n * (1 - 1/k)`.
    pub max_closed_form_gap: f64,
    /// `Rel_t` for `t = 0..=n`, indexed by prefix enumeration order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<Vec<f64>>>,
}

impl GameValueReport {
    /// The value is nonpositive whenever `E phi >= 1 - 1/k`.
    pub fn sign_consistent(&self, tol: f64) -> bool {
        self.expected > tol || self.rel0 <= tol
    }
}

/// Backward recursion `Rel_n = -phi`,
/// `Rel_{t-1} = mean over children of Rel_t + (1/n)(1 - 1/k)`.
pub fn game_value(phi: &PotentialFunction) -> Result<GameValueReport> {
    let alphabet = phi.alphabet();
    let n = phi.horizon();
    let k = alphabet.size();
    let step = achievable_level(alphabet) / n as f64;
    let values = phi.values()?;

    let mut levels = vec![values.iter().map(|v| -v).collect::<Vec<f64>>()];
    for _ in 0..n {
        let below = levels.last().expect("nonempty");
        levels.push(
            below
                .chunks_exact(k)
                .map(|c| c.iter().sum::<f64>() / k as f64 + step)
                .collect(),
        );
    }
    levels.reverse();

    let mut max_closed_form_gap = 0.0f64;
    for (t, table) in levels.iter().enumerate() {
        let block = values.len() / table.len();
        let remaining = achievable_level(alphabet) * (n - t) as f64 / n as f64;
        for (p, &rel) in table.iter().enumerate() {
            let s: CompensatedSum = values[p * block..(p + 1) * block].iter().copied().collect();
            let closed = -s.value() / block as f64 + remaining;
            max_closed_form_gap = max_closed_form_gap.max((rel - closed).abs());
        }
    }

    let mean_phi = values.iter().copied().collect::<CompensatedSum>().value() / values.len() as f64;
    let expected = achievable_level(alphabet) - mean_phi;
    let rel0 = levels[0][0];
    Ok(GameValueReport {
        horizon: n,
        alphabet: alphabet.to_string(),
        rel0,
        mean_phi,
        expected,
        identity_gap: (rel0 - expected).abs(),
        max_closed_form_gap,
        tables: (n <= MAX_TABLE_HORIZON).then_some(levels),
    })
}
