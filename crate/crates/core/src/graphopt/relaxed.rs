use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use super::laplacian::{build_laplacian, DegreeConvention, Laplacian, Origin};
use crate::error::{Error, Result};
use crate::philib::{rademacher_mc, PenaltyConstant, RademacherMode};
use crate::potential::PotentialFunction;
use crate::sequence::{Alphabet, Outcome};
use crate::stats::CompensatedSum;

/// The box-constrained quadratic budget set `{w in [-1,1]^n : w^T L w <= kappa}`.
#[derive(Clone, Debug)]
pub struct RelaxedSet {
    laplacian: Arc<Laplacian>,
    kappa: f64,
}

impl RelaxedSet {
    pub fn new(laplacian: Laplacian, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa must be finite and >= 0, got {kappa}"
            )));
        }
        if laplacian.dimension() == 0 {
            return Err(Error::Graph("relaxed set needs at least one vertex".into()));
        }
        Ok(Self {
            laplacian: Arc::new(laplacian),
            kappa,
        })
    }

    pub fn from_graph(graph: &WeightedGraph, kappa: f64) -> Result<Self> {
        Self::new(build_laplacian(graph), kappa)
    }

    pub fn laplacian(&self) -> &Laplacian {
        &self.laplacian
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dimension(&self) -> usize {
        self.laplacian.dimension()
    }

    /// Slack used when comparing a quadratic form against the budget.
    pub fn slack(&self) -> f64 {
        1e-9 * self.kappa.max(1.0)
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        w.len() == self.dimension()
            && w.iter().all(|x| (-1.0..=1.0).contains(x))
            && self.laplacian.quadratic_form(w) <= self.kappa + self.slack()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_bisection_steps: usize,
    pub max_sweeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_bisection_steps: 200,
            max_sweeps: 10_000,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxedSolution {
    /// `1/2 - objective / (2n)`.
    pub distance: f64,
    /// `max w^T y` over the relaxed set, attained by `w`.
    pub objective: f64,
    pub w: Vec<f64>,
    /// `w^T L w` at the returned point.
    pub quadratic: f64,
    pub multiplier: f64,
    /// Certified bound on `optimum - objective`.
    pub gap: f64,
    pub degraded: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .collect::<CompensatedSum>()
        .value()
}

fn bilinear(l: &Laplacian, a: &[f64], b: &[f64]) -> f64 {
    let mut total = CompensatedSum::default();
    for (i, &ai) in a.iter().enumerate() {
        let mut s = l.diagonal()[i] * b[i];
        for &(j, x) in l.row(i) {
            s += x * b[j];
        }
        total.add(ai * s);
    }
    total.value()
}

/// Projected coordinate ascent on `w^T y - lambda w^T L w` over the box.
fn ascend(l: &Laplacian, y: &[f64], lambda: f64, w: &mut [f64], opts: &SolverOptions) -> bool {
    let n = w.len();
    let mut s: Vec<f64> = (0..n)
        .map(|i| l.row(i).iter().map(|&(j, x)| x * w[j]).sum())
        .collect();
    let inner_tol = opts.tol / 10.0;
    for _ in 0..opts.max_sweeps {
        let mut change = 0.0f64;
        for i in 0..n {
            let d = l.diagonal()[i];
            let target = if d > 0.0 {
                ((y[i] - 2.0 * lambda * s[i]) / (2.0 * lambda * d)).clamp(-1.0, 1.0)
            } else {
                y[i].clamp(-1.0, 1.0)
            };
            let delta = target - w[i];
            if delta != 0.0 {
                w[i] = target;
                for &(j, x) in l.row(i) {
                    s[j] += x * delta;
                }
                change = change.max(delta.abs());
            }
        }
        if change <= inner_tol {
            return true;
        }
    }
    false
}

/// Closed form for a zero budget on a graph Laplacian: the feasible set is
/// spanned, per connected component, by the signing that agrees across
/// positive edges and disagrees across negative ones, and collapses to zero
/// on components where no such signing exists.
fn zero_budget(l: &Laplacian, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut sign = vec![0.0f64; n];
    let mut w = vec![0.0; n];
    for root in 0..n {
        if sign[root] != 0.0 {
            continue;
        }
        sign[root] = 1.0;
        let mut members = vec![root];
        let mut balanced = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, x) in l.row(u) {
                let want = if x < 0.0 { sign[u] } else { -sign[u] };
                if sign[v] == 0.0 {
                    sign[v] = want;
                    members.push(v);
                    queue.push_back(v);
                } else if sign[v] != want {
                    balanced = false;
                }
            }
        }
        if balanced {
            let total: f64 = members.iter().map(|&i| sign[i] * y[i]).sum();
            let a = if total >= 0.0 { 1.0 } else { -1.0 };
            for &i in &members {
                w[i] = a * sign[i];
            }
        }
    }
    w
}

fn validate_labels(n: usize, y: &[Outcome]) -> Result<Vec<f64>> {
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    Alphabet::Binary.validate(y)?;
    Ok(y.iter().map(|&v| v as f64).collect())
}

/// Solves `max { w^T y : w in set }` and reports `1/2 - max / (2n)`.
///
/// The returned `w` always lies in the box and satisfies the quadratic
/// budget up to [`RelaxedSet::slack`].
pub fn relaxed_distance(
    set: &RelaxedSet,
    y: &[Outcome],
    opts: &SolverOptions,
) -> Result<RelaxedSolution> {
    opts.validate()?;
    let l = set.laplacian();
    l.ensure_psd()?;
    let n = l.dimension();
    let yv = validate_labels(n, y)?;
    let kappa = set.kappa();
    let slack = set.slack();
    let finish = |w: Vec<f64>, multiplier: f64, upper: f64, degraded: bool| {
        let objective = dot(&w, &yv);
        let quadratic = l.quadratic_form(&w);
        RelaxedSolution {
            distance: 0.5 - objective / (2.0 * n as f64),
            objective,
            quadratic,
            multiplier,
            gap: (upper - objective).max(0.0),
            degraded,
            w,
        }
    };

    if l.quadratic_form(&yv) <= kappa + slack {
        return Ok(finish(yv.clone(), 0.0, n as f64, false));
    }
    if kappa == 0.0 && l.origin() == Origin::Graph(DegreeConvention::Absolute) {
        let w = zero_budget(l, &yv);
        let obj = dot(&w, &yv);
        return Ok(finish(w, f64::INFINITY, obj, false));
    }

    let feasible = |w: &[f64]| l.quadratic_form(w) <= kappa;
    let mut lam_lo = 0.0;
    let mut w_lo = yv.clone();
    let mut lam_hi = 1.0 / l.diagonal().iter().fold(1.0f64, |m, &d| m.max(d));
    let mut w_hi = yv.clone();
    let mut converged = ascend(l, &yv, lam_hi, &mut w_hi, opts);
    let mut found = feasible(&w_hi);
    for _ in 0..200 {
        if found {
            break;
        }
        lam_lo = lam_hi;
        w_lo.copy_from_slice(&w_hi);
        lam_hi *= 2.0;
        converged &= ascend(l, &yv, lam_hi, &mut w_hi, opts);
        found = feasible(&w_hi);
    }
    if !found {
        w_hi.iter_mut().for_each(|x| *x = 0.0);
    }

    let target = opts.tol * n as f64;
    let mut w_mid = w_hi.clone();
    for _ in 0..opts.max_bisection_steps {
        if dot(&w_lo, &yv) - dot(&w_hi, &yv) <= target || !found {
            break;
        }
        let mid = 0.5 * (lam_lo + lam_hi);
        if mid <= lam_lo || mid >= lam_hi {
            break;
        }
        w_mid.copy_from_slice(&w_hi);
        converged &= ascend(l, &yv, mid, &mut w_mid, opts);
        if feasible(&w_mid) {
            lam_hi = mid;
            std::mem::swap(&mut w_hi, &mut w_mid);
        } else {
            lam_lo = mid;
            std::mem::swap(&mut w_lo, &mut w_mid);
        }
    }

    let upper = dot(&w_lo, &yv);
    let w = interpolate(l, kappa, &w_lo, &w_hi, &yv);
    let obj = dot(&w, &yv);
    let degraded = !converged || upper - obj > target;
    Ok(finish(w, lam_hi, upper, degraded))
}

/// The point on the segment from `inside` towards `outside` with the largest
/// step that keeps `w^T L w <= kappa`.
fn interpolate(l: &Laplacian, kappa: f64, outside: &[f64], inside: &[f64], y: &[f64]) -> Vec<f64> {
    if dot(outside, y) <= dot(inside, y) {
        return inside.to_vec();
    }
    let diff: Vec<f64> = outside.iter().zip(inside).map(|(a, b)| a - b).collect();
    let alpha = l.quadratic_form(&diff);
    let beta = 2.0 * bilinear(l, inside, &diff);
    let c = l.quadratic_form(inside) - kappa;
    let mut theta = if alpha <= f64::EPSILON * (beta.abs() + c.abs()) {
        if beta <= 0.0 {
            1.0
        } else {
            -c / beta
        }
    } else {
        (-beta + (beta * beta - 4.0 * alpha * c).max(0.0).sqrt()) / (2.0 * alpha)
    };
    theta = theta.clamp(0.0, 1.0);
    for _ in 0..60 {
        let w: Vec<f64> = inside
            .iter()
            .zip(&diff)
            .map(|(b, d)| (b + theta * d).clamp(-1.0, 1.0))
            .collect();
        if l.quadratic_form(&w) <= kappa {
            return w;
        }
        theta *= 1.0 - 1e-9;
        if theta < 1e-12 {
            break;
        }
    }
    inside.to_vec()
}

/// `phi'(y) = relaxed_distance(y) + penalty`.
pub fn relaxed_graph_phi(
    set: &RelaxedSet,
    penalty: PenaltyConstant,
    opts: SolverOptions,
) -> Result<PotentialFunction> {
    opts.validate()?;
    set.laplacian().ensure_psd()?;
    let set = set.clone();
    let p = penalty.value();
    PotentialFunction::new(set.dimension(), Alphabet::Binary, move |y| {
        relaxed_distance(&set, y, &opts).map_or(f64::NAN, |s| s.distance) + p
    })
}

/// Rademacher average of the relaxed set, `1/2 - E relaxed_distance(eps)`.
pub fn relaxed_rademacher(
    set: &RelaxedSet,
    mode: RademacherMode,
    opts: SolverOptions,
) -> Result<PenaltyConstant> {
    opts.validate()?;
    set.laplacian().ensure_psd()?;
    let r = rademacher_mc(
        |eps| relaxed_distance(set, eps, &opts).map_or(f64::NAN, |s| s.objective),
        set.dimension(),
        mode,
    )?;
    if !r.value().is_finite() {
        return Err(Error::InvalidArgument(
            "relaxed solver failed during estimation".into(),
        ));
    }
    Ok(r)
}

/// `(1/(2n)) sqrt(sum_j 1/lambda_j(M))` with `M = I/(2n) + L/(2 kappa)`.
pub fn spectral_rad_bound(set: &RelaxedSet) -> Result<f64> {
    let kappa = set.kappa();
    if kappa <= 0.0 {
        return Err(Error::InvalidArgument(
            "spectral bound needs kappa > 0".into(),
        ));
    }
    let n = set.dimension() as f64;
    let mut total = CompensatedSum::default();
    for &mu in set.laplacian().eigenvalues()? {
        let m = 1.0 / (2.0 * n) + mu / (2.0 * kappa);
        if m <= 0.0 {
            return Err(Error::NotPositiveDefinite { eigenvalue: m });
        }
        total.add(1.0 / m);
    }
    Ok(total.value().sqrt() / (2.0 * n))
}
