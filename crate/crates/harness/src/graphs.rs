//! Online node classification on a graph and Rademacher estimates for the
//! relaxed labeling set.

use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use seqpred::graphopt::{
    relaxed_distance, relaxed_graph_phi, relaxed_rademacher, spectral_rad_bound,
    ExactConstraintSet, RelaxedSet, SolverOptions, WeightedGraph,
};
use seqpred::philib::{finite_set_phi, PenaltyConstant, RademacherMode};
use seqpred::transcript::{replay, Transcript};
use seqpred::{Alphabet, MonteCarlo, PlayoutConfig};

use crate::config::read_outcomes;
use crate::error::{HarnessError, HarnessResult};

/// Largest vertex count for which Rademacher averages are enumerated.
const EXHAUSTIVE_RAD_VERTICES: usize = 16;

#[derive(Clone, Debug)]
pub struct NodeClassifyOptions {
    pub graph: PathBuf,
    pub kappa: f64,
    /// One label per vertex, in vertex order.
    pub labels: PathBuf,
    /// Use the convex relaxation instead of enumerating labelings.
    pub relaxed: bool,
    /// `None` or `Some(1)`: one playout per round; `Some(0)`: every tail.
    pub playouts: Option<usize>,
    pub rad_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeClassifyReport {
    pub vertices: usize,
    pub kappa: f64,
    pub relaxed: bool,
    /// Normalized distance from the labels to the labeling set.
    pub distance: f64,
    pub penalty: f64,
    /// `distance + penalty`, the guaranteed bound on the expected error rate.
    pub bound: f64,
    pub expected_mistake_rate: f64,
    pub mistakes: usize,
    #[serde(skip)]
    pub transcript: Transcript,
}

fn playout_config(playouts: Option<usize>, seed: u64) -> PlayoutConfig {
    match playouts {
        Some(0) => PlayoutConfig::exhaustive().with_seed(seed),
        None | Some(1) => PlayoutConfig::single_playout(seed),
        Some(m) => PlayoutConfig::monte_carlo(m, seed),
    }
}

fn rad_mode(n: usize, samples: usize, seed: u64) -> RademacherMode {
    if n <= EXHAUSTIVE_RAD_VERTICES {
        RademacherMode::Exhaustive
    } else {
        RademacherMode::MonteCarlo(MonteCarlo::new(samples, seed))
    }
}

/// Sampled penalties are raised by their half-width so that the potential
/// keeps a mean of at least one half.
fn conservative(p: PenaltyConstant) -> HarnessResult<PenaltyConstant> {
    if p.half_width() > 0.0 {
        Ok(PenaltyConstant::analytic(p.value() + p.half_width())?)
    } else {
        Ok(p)
    }
}

pub fn node_classify(opts: &NodeClassifyOptions) -> HarnessResult<NodeClassifyReport> {
    let graph = WeightedGraph::from_file(&opts.graph)?;
    let n = graph.vertex_count();
    let labels = read_outcomes(&opts.labels, Alphabet::Binary)?;
    if labels.len() != n {
        return Err(HarnessError::config(format!(
            "the graph has {n} vertices but {} labels were given",
            labels.len()
        )));
    }
    let set = RelaxedSet::from_graph(&graph, opts.kappa)?;
    let solver = SolverOptions::default();
    let mode = rad_mode(n, opts.rad_samples, opts.seed);
    let (phi, distance, penalty) = if opts.relaxed {
        let penalty = conservative(relaxed_rademacher(&set, mode, solver)?)?;
        let distance = relaxed_distance(&set, &labels, &solver)?.distance;
        let value = penalty.value();
        (relaxed_graph_phi(&set, penalty, solver)?, distance, value)
    } else {
        let members = ExactConstraintSet::new(&set)?
            .to_vertex_set()?
            .ok_or_else(|| {
                HarnessError::config(format!("no labeling has cut value at most {}", opts.kappa))
            })?;
        let penalty = conservative(members.rademacher(mode)?)?;
        let distance = members.hamming_distance(&labels);
        let value = penalty.value();
        (finite_set_phi(&members, penalty)?, distance, value)
    };
    let transcript = replay(
        &phi,
        playout_config(opts.playouts, opts.seed),
        opts.seed,
        &labels,
    )?;
    let summary = transcript
        .summary
        .clone()
        .expect("a full replay has a summary");
    Ok(NodeClassifyReport {
        vertices: n,
        kappa: opts.kappa,
        relaxed: opts.relaxed,
        distance,
        penalty,
        bound: summary.phi,
        expected_mistake_rate: summary.mu_hat,
        mistakes: summary.mistakes,
        transcript,
    })
}

#[derive(Clone, Debug)]
pub struct RadOptions {
    pub graph: PathBuf,
    pub kappa: f64,
    pub samples: Option<usize>,
    pub seed: u64,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloRad {
    pub value: f64,
    pub half_width: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadReport {
    pub vertices: usize,
    pub kappa: f64,
    pub monte_carlo: Option<MonteCarloRad>,
    pub exhaustive: Option<f64>,
    pub spectral_bound: f64,
    /// Exhaustive value (or the Monte Carlo estimate) over the spectral bound.
    pub ratio: f64,
}

pub fn rad(opts: &RadOptions) -> HarnessResult<RadReport> {
    let graph = WeightedGraph::from_file(&opts.graph)?;
    let set = RelaxedSet::from_graph(&graph, opts.kappa)?;
    let solver = SolverOptions::default();
    let bound = spectral_rad_bound(&set)?;
    let samples = match (opts.samples, opts.exhaustive) {
        (Some(m), _) => Some(m),
        (None, false) => Some(10_000),
        (None, true) => None,
    };
    let monte_carlo = samples
        .map(|m| -> HarnessResult<MonteCarloRad> {
            let p = relaxed_rademacher(
                &set,
                RademacherMode::MonteCarlo(MonteCarlo::new(m, opts.seed)),
                solver,
            )?;
            Ok(MonteCarloRad {
                value: p.value(),
                half_width: p.half_width(),
                samples: m,
                seed: opts.seed,
            })
        })
        .transpose()?;
    let exhaustive = if opts.exhaustive {
        Some(relaxed_rademacher(&set, RademacherMode::Exhaustive, solver)?.value())
    } else {
        None
    };
    let estimate = exhaustive
        .or(monte_carlo.as_ref().map(|m| m.value))
        .unwrap_or(0.0);
    Ok(RadReport {
        vertices: set.dimension(),
        kappa: opts.kappa,
        monte_carlo,
        exhaustive,
        spectral_bound: bound,
        ratio: estimate / bound,
    })
}

impl fmt::Display for RadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices)?;
        writeln!(f, "kappa: {}", self.kappa)?;
        if let Some(m) = &self.monte_carlo {
            writeln!(
                f,
                "rad_monte_carlo: {:.6} +/- {:.6} (samples {}, seed {})",
                m.value, m.half_width, m.samples, m.seed
            )?;
        }
        if let Some(e) = self.exhaustive {
            writeln!(f, "rad_exhaustive: {e:.6}")?;
        }
        writeln!(f, "spectral_bound: {:.6}", self.spectral_bound)?;
        write!(f, "ratio: {:.4}", self.ratio)
    }
}
