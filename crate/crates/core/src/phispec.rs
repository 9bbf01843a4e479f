//! JSON descriptions of potential functions.
//!
//! ```json
//! {"kind": "imbalance", "n": 10, "c": 0.5}
//! {"kind": "finite_set", "n": 8, "source": {"pattern": {"max_period": 2}},
//!  "penalty": {"kind": "exhaustive"}}
//! {"kind": "graph_relaxed", "graph": {"file": "g.edges"}, "kappa": 4.0,
//!  "penalty": {"kind": "monte_carlo", "samples": 10000, "seed": 1}}
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphopt::{
    relaxed_graph_phi, relaxed_rademacher, RelaxedSet, SolverOptions, WeightedGraph,
};
use crate::philib::{
    aggregate_phi, ball_family, class_rademacher, finite_set_phi, imbalance_phi, pattern_family,
    projection_phi, threshold, FiniteVertexSet, FunctionClass, PenaltyConstant, RademacherMode,
    DEFAULT_AGGREGATION_C, DEFAULT_IMBALANCE_C,
};
use crate::potential::{CovariatePotential, PotentialFunction};
use crate::sequence::{Alphabet, Outcome};
use crate::stats::MonteCarlo;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Imbalance {
        n: usize,
        #[serde(default = "default_imbalance_c")]
        c: f64,
    },
    FiniteSet {
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        alphabet: Option<Alphabet>,
        source: SetSource,
        #[serde(default)]
        penalty: PenaltySpec,
    },
    Aggregate {
        members: Vec<PhiSpec>,
        #[serde(default = "default_aggregation_c")]
        c: f64,
    },
    GraphRelaxed {
        graph: GraphSpec,
        kappa: f64,
        #[serde(default)]
        penalty: PenaltySpec,
        #[serde(default)]
        solver: Option<SolverOptions>,
    },
    Projection {
        n: usize,
        thresholds: Vec<f64>,
        #[serde(default)]
        penalty: PenaltySpec,
    },
}

fn default_imbalance_c() -> f64 {
    DEFAULT_IMBALANCE_C
}

fn default_aggregation_c() -> f64 {
    DEFAULT_AGGREGATION_C
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetSource {
    Members(Vec<Vec<Outcome>>),
    Pattern {
        max_period: usize,
    },
    Ball {
        graph: GraphSpec,
        radius: usize,
        #[serde(default)]
        flip: bool,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PenaltySpec {
    #[default]
    Zero,
    Analytic {
        value: f64,
    },
    /// Rademacher average by enumeration of sign vectors.
    Exhaustive,
    MonteCarlo {
        samples: usize,
        seed: u64,
        /// Add the 3-sigma half-width to the estimate.
        #[serde(default)]
        conservative: bool,
    },
    /// `sqrt(2 ln N) / (2 sqrt(n))` for a finite set of size `N`.
    FiniteClassBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    File {
        file: PathBuf,
    },
    Inline {
        #[serde(default)]
        n: Option<usize>,
        edges: Vec<(usize, usize, f64)>,
    },
}

impl GraphSpec {
    pub fn load(&self, base: Option<&Path>) -> Result<WeightedGraph> {
        match self {
            GraphSpec::File { file } => WeightedGraph::from_file(resolve(base, file)),
            GraphSpec::Inline { n, edges } => {
                let n = n.unwrap_or_else(|| {
                    edges
                        .iter()
                        .map(|&(u, v, _)| u.max(v) + 1)
                        .max()
                        .unwrap_or(0)
                });
                WeightedGraph::new(n, edges.clone())
            }
        }
    }
}

fn resolve(base: Option<&Path>, file: &Path) -> PathBuf {
    match base {
        Some(dir) if file.is_relative() => dir.join(file),
        _ => file.to_path_buf(),
    }
}

fn spec_error(message: impl Into<String>) -> Error {
    Error::Spec(message.into())
}

impl PenaltySpec {
    fn resolve<F>(
        &self,
        n: usize,
        set_size: Option<usize>,
        rademacher: F,
    ) -> Result<PenaltyConstant>
    where
        F: FnOnce(RademacherMode) -> Result<PenaltyConstant>,
    {
        match *self {
            PenaltySpec::Zero => Ok(PenaltyConstant::zero()),
            PenaltySpec::Analytic { value } => PenaltyConstant::analytic(value),
            PenaltySpec::Exhaustive => rademacher(RademacherMode::Exhaustive),
            PenaltySpec::MonteCarlo {
                samples,
                seed,
                conservative,
            } => {
                let p = rademacher(RademacherMode::MonteCarlo(MonteCarlo::new(samples, seed)))?;
                if conservative {
                    PenaltyConstant::analytic(p.value() + p.half_width())
                } else {
                    Ok(p)
                }
            }
            PenaltySpec::FiniteClassBound => {
                let size =
                    set_size.ok_or_else(|| spec_error("finite_class_bound needs a finite set"))?;
                PenaltyConstant::finite_class_bound(n, size)
            }
        }
    }
}

impl PhiSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| spec_error(e.to_string()))
    }

    pub fn is_covariate(&self) -> bool {
        matches!(self, PhiSpec::Projection { .. })
    }

    /// Builds a potential over outcomes; relative graph paths resolve
    /// against `base`.
    pub fn build(&self, base: Option<&Path>) -> Result<PotentialFunction> {
        match self {
            PhiSpec::Imbalance { n, c } => imbalance_phi(*n, *c),
            PhiSpec::FiniteSet { .. } => {
                let (set, penalty) = self.finite_set(base)?;
                finite_set_phi(&set, penalty)
            }
            PhiSpec::Aggregate { members, c } => {
                let phis = members
                    .iter()
                    .map(|m| m.build(base))
                    .collect::<Result<Vec<_>>>()?;
                aggregate_phi(&phis, *c)
            }
            PhiSpec::GraphRelaxed {
                graph,
                kappa,
                penalty,
                solver,
            } => {
                let set = RelaxedSet::from_graph(&graph.load(base)?, *kappa)?;
                let opts = solver.unwrap_or_default();
                let p = penalty.resolve(set.dimension(), None, |mode| {
                    relaxed_rademacher(&set, mode, opts)
                })?;
                relaxed_graph_phi(&set, p, opts)
            }
            PhiSpec::Projection { .. } => Err(spec_error(
                "projection potentials depend on covariates; build them with build_covariate",
            )),
        }
    }

    /// Builds a covariate potential over `f64` covariates. Non-projection
    /// specs ignore the covariates.
    pub fn build_covariate(&self, base: Option<&Path>) -> Result<CovariatePotential<f64>> {
        match self {
            PhiSpec::Projection {
                n,
                thresholds,
                penalty,
            } => {
                let class = FunctionClass::new(thresholds.iter().map(|&a| threshold(a)).collect())?;
                let p = penalty.resolve(*n, Some(class.len()), |mode| match mode {
                    RademacherMode::MonteCarlo(plan) => {
                        class_rademacher(&class, *n, crate::oracle::uniform_unit, plan)
                    }
                    RademacherMode::Exhaustive => Err(spec_error(
                        "projection penalties are estimated by Monte Carlo over uniform covariates",
                    )),
                })?;
                projection_phi(&class, *n, p)
            }
            other => CovariatePotential::ignoring_covariates(&other.build(base)?),
        }
    }

    /// The horizon described by the spec, resolving graph files if needed.
    pub fn horizon(&self, base: Option<&Path>) -> Result<usize> {
        match self {
            PhiSpec::Imbalance { n, .. } | PhiSpec::Projection { n, .. } => Ok(*n),
            PhiSpec::FiniteSet { .. } => Ok(self.finite_set(base)?.0.horizon()),
            PhiSpec::Aggregate { members, .. } => members
                .first()
                .ok_or_else(|| spec_error("aggregate needs at least one member"))?
                .horizon(base),
            PhiSpec::GraphRelaxed { graph, .. } => Ok(graph.load(base)?.vertex_count()),
        }
    }

    fn finite_set(&self, base: Option<&Path>) -> Result<(FiniteVertexSet, PenaltyConstant)> {
        let PhiSpec::FiniteSet {
            n,
            alphabet,
            source,
            penalty,
        } = self
        else {
            unreachable!("called on finite_set specs only");
        };
        let alphabet = alphabet.unwrap_or(Alphabet::Binary);
        let set = match source {
            SetSource::Members(m) => FiniteVertexSet::new(alphabet, m.clone())?,
            SetSource::Pattern { max_period } => {
                let n = n.ok_or_else(|| spec_error("pattern sources need the horizon `n`"))?;
                pattern_family(n, *max_period)?
            }
            SetSource::Ball {
                graph,
                radius,
                flip,
            } => ball_family(&graph.load(base)?, *radius, *flip)?,
        };
        if let Some(n) = n {
            if *n != set.horizon() {
                return Err(spec_error(format!(
                    "declared n = {n} but the set has length {}",
                    set.horizon()
                )));
            }
        }
        if set.alphabet() != alphabet {
            return Err(spec_error("set sources other than members are binary"));
        }
        let p = penalty.resolve(set.horizon(), Some(set.len()), |mode| set.rademacher(mode))?;
        Ok((set, p))
    }
}
