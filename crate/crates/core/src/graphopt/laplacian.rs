use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use crate::error::{Error, Result};
use crate::sequence::Outcome;

/// Largest dimension for dense eigendecompositions.
pub const MAX_DENSE_DIMENSION: usize = 5000;

/// How the degree matrix is formed from signed weights.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeConvention {
    /// `D_ii = sum_j |W_ij|`; always positive semidefinite.
    #[default]
    Absolute,
    /// `D_ii = sum_j W_ij`; may be indefinite with negative weights.
    Signed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Origin {
    Graph(DegreeConvention),
    Matrix,
}

/// A symmetric matrix `L = D - W`, stored as its diagonal plus sparse
/// off-diagonal rows.
#[derive(Clone, Debug)]
pub struct Laplacian {
    diagonal: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    origin: Origin,
    spectrum: Arc<OnceLock<std::result::Result<Vec<f64>, Error>>>,
}

/// Builds the Laplacian with the absolute-degree convention.
pub fn build_laplacian(graph: &WeightedGraph) -> Laplacian {
    Laplacian::from_graph(graph, DegreeConvention::Absolute)
}

impl Laplacian {
    pub fn from_graph(graph: &WeightedGraph, convention: DegreeConvention) -> Self {
        let n = graph.vertex_count();
        let mut diagonal = vec![0.0; n];
        let mut rows = vec![Vec::new(); n];
        for &(u, v, w) in graph.edges() {
            if w == 0.0 {
                continue;
            }
            let d = match convention {
                DegreeConvention::Absolute => w.abs(),
                DegreeConvention::Signed => w,
            };
            diagonal[u] += d;
            diagonal[v] += d;
            rows[u].push((v, -w));
            rows[v].push((u, -w));
        }
        for r in &mut rows {
            r.sort_by_key(|e| e.0);
        }
        Self {
            diagonal,
            rows,
            origin: Origin::Graph(convention),
            spectrum: Arc::default(),
        }
    }

    /// Accepts an arbitrary symmetric matrix given row by row.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        let mut diagonal = vec![0.0; n];
        let mut rows = vec![Vec::new(); n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i}, {j}) is not finite"
                    )));
                }
                if x != matrix[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                if i == j {
                    diagonal[i] = x;
                } else if x != 0.0 {
                    rows[i].push((j, x));
                }
            }
        }
        Ok(Self {
            diagonal,
            rows,
            origin: Origin::Matrix,
            spectrum: Arc::default(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Nonzero off-diagonal entries of row `i`.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub(crate) fn origin(&self) -> Origin {
        self.origin
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diagonal[i];
        }
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0.0, |k| self.rows[i][k].1)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diagonal[i];
            for &(j, x) in &self.rows[i] {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// `w^T L w`.
    pub fn quadratic_form(&self, w: &[f64]) -> f64 {
        let mut total = 0.0;
        for (i, &wi) in w.iter().enumerate() {
            let mut s = self.diagonal[i] * wi;
            for &(j, x) in &self.rows[i] {
                s += x * w[j];
            }
            total += wi * s;
        }
        total
    }

    /// Eigenvalues in ascending order, computed once.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        let n = self.dimension();
        if n > MAX_DENSE_DIMENSION {
            return Err(Error::HorizonTooLarge {
                horizon: n,
                limit: format!("dense eigendecomposition needs n <= {MAX_DENSE_DIMENSION}"),
            });
        }
        let spectrum = self.spectrum.get_or_init(|| {
            let mut values: Vec<f64> = SymmetricEigen::new(self.to_dense())
                .eigenvalues
                .iter()
                .copied()
                .collect();
            values.sort_by(f64::total_cmp);
            Ok(values)
        });
        spectrum.as_deref().map_err(Clone::clone)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// Errors with the offending eigenvalue unless `L` is positive semidefinite
    /// up to a relative rounding slack.
    pub fn ensure_psd(&self) -> Result<()> {
        if self.origin == Origin::Graph(DegreeConvention::Absolute) {
            return Ok(());
        }
        let min = self.min_eigenvalue()?;
        let scale = self.diagonal.iter().fold(1.0f64, |m, d| m.max(d.abs()));
        if min < -1e-10 * scale * self.dimension().max(1) as f64 {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: min });
        }
        Ok(())
    }
}

/// `y^T L y` for a `{-1,+1}` labeling.
pub fn cut_value(laplacian: &Laplacian, y: &[Outcome]) -> Result<f64> {
    if y.len() != laplacian.dimension() {
        return Err(Error::DimensionMismatch {
            expected: laplacian.dimension(),
            got: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::InvalidOutcome {
            value: bad as i64,
            alphabet: "binary".into(),
        });
    }
    let w: Vec<f64> = y.iter().map(|&v| v as f64).collect();
    Ok(laplacian.quadratic_form(&w))
}
