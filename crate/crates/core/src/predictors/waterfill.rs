use crate::error::{Error, Result};

/// `max_j (psi[j] - q[j])`, the quantity minimized by [`waterfill`].
pub fn minimax_objective(psi: &[f64], q: &[f64]) -> f64 {
    psi.iter()
        .zip(q)
        .map(|(p, x)| p - x)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The point of the simplex minimizing `max_j (psi[j] - q[j])`.
///
/// Finds the level `c` with `sum_j max(psi[j] - c, 0) = 1` by sorting and
/// scanning, then sets `q[j] = max(psi[j] - c, 0)`. When the spread of `psi`
/// is at most one, all gaps `psi[j] - q[j]` are equal to `c`.
pub fn waterfill(psi: &[f64]) -> Result<Vec<f64>> {
    let k = psi.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "water-filling needs k >= 2, got {k}"
        )));
    }
    if let Some(bad) = psi.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite score {bad}")));
    }
    // Descending; equal scores keep the lowest label first.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| psi[b].total_cmp(&psi[a]).then(a.cmp(&b)));

    let mut prefix = 0.0;
    let mut level = psi[order[0]] - 1.0;
    for (m, &j) in order.iter().enumerate() {
        prefix += psi[j];
        let candidate = (prefix - 1.0) / (m + 1) as f64;
        if psi[j] > candidate {
            level = candidate;
        } else {
            break;
        }
    }
    let mut q: Vec<f64> = psi.iter().map(|&p| (p - level).max(0.0)).collect();
    // Remove rounding drift so the forecast sums to one.
    let total: f64 = q.iter().sum();
    if total > 0.0 {
        q.iter_mut().for_each(|x| *x /= total);
    }
    Ok(q)
}
