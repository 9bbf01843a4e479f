use rayon::prelude::*;

use super::laplacian::Laplacian;
use super::relaxed::RelaxedSet;
use crate::error::{Error, Result};
use crate::philib::FiniteVertexSet;
use crate::sequence::{Alphabet, Outcome};

/// Largest vertex count accepted by the enumeration routines.
pub const MAX_BRUTEFORCE_VERTICES: usize = 22;

fn check_size(n: usize) -> Result<usize> {
    if n > MAX_BRUTEFORCE_VERTICES {
        return Err(Error::HorizonTooLarge {
            horizon: n,
            limit: format!("enumeration needs n <= {MAX_BRUTEFORCE_VERTICES}"),
        });
    }
    Ok(1usize << n)
}

fn labeling(n: usize, index: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if index >> (n - 1 - i) & 1 == 1 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

/// The labelings in `{-1,+1}^n` that satisfy the budget, by enumeration.
#[derive(Clone, Debug)]
pub struct ExactConstraintSet {
    n: usize,
    members: Vec<usize>,
}

impl ExactConstraintSet {
    pub fn new(set: &RelaxedSet) -> Result<Self> {
        let n = set.dimension();
        let count = check_size(n)?;
        let bound = set.kappa() + set.slack();
        let l = set.laplacian();
        let members = (0..count)
            .into_par_iter()
            .filter(|&i| l.quadratic_form(&labeling(n, i)) <= bound)
            .collect();
        Ok(Self { n, members })
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Normalized Hamming distance to the nearest member, `+inf` when empty.
    pub fn distance(&self, y: &[Outcome]) -> f64 {
        let index = Alphabet::Binary.encode(y);
        self.members
            .iter()
            .map(|&m| (m ^ index).count_ones())
            .min()
            .map_or(f64::INFINITY, |d| d as f64 / self.n as f64)
    }

    pub fn to_vertex_set(&self) -> Result<Option<FiniteVertexSet>> {
        if self.members.is_empty() {
            return Ok(None);
        }
        let rows = self
            .members
            .iter()
            .map(|&m| {
                labeling(self.n, m)
                    .into_iter()
                    .map(|x| x as Outcome)
                    .collect()
            })
            .collect();
        FiniteVertexSet::new(Alphabet::Binary, rows).map(Some)
    }
}

/// Exact `d_H(y, F_kappa)` by enumeration; `+inf` when no labeling fits the budget.
pub fn exact_distance_bruteforce(set: &RelaxedSet, y: &[Outcome]) -> Result<f64> {
    if y.len() != set.dimension() {
        return Err(Error::DimensionMismatch {
            expected: set.dimension(),
            got: y.len(),
        });
    }
    Alphabet::Binary.validate(y)?;
    Ok(ExactConstraintSet::new(set)?.distance(y))
}

/// `min_y y^T L y` over all labelings.
pub fn min_cut_value(laplacian: &Laplacian) -> Result<f64> {
    let n = laplacian.dimension();
    let count = check_size(n)?;
    Ok((0..count)
        .into_par_iter()
        .map(|i| laplacian.quadratic_form(&labeling(n, i)))
        .reduce(|| f64::INFINITY, f64::min))
}
