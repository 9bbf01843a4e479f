use std::sync::Arc;

use super::rademacher::{rademacher_mc, RademacherMode};
use super::sets::FiniteVertexSet;
use super::{PenaltyConstant, PenaltyProvenance};
use crate::error::{Error, Result};
use crate::potential::CovariatePotential;
use crate::random::rademacher;
use crate::sequence::{Alphabet, Outcome};
use crate::stats::MonteCarlo;

/// A map from covariates to `{-1,+1}`.
pub type Classifier<X> = Arc<dyn Fn(&X) -> Outcome + Send + Sync>;

/// `x -> +1` if `x >= a`, else `-1`.
pub fn threshold(a: f64) -> Classifier<f64> {
    Arc::new(move |&x| if x >= a { 1 } else { -1 })
}

/// A nonempty finite list of classifiers.
pub struct FunctionClass<X> {
    members: Vec<Classifier<X>>,
}

impl<X> Clone for FunctionClass<X> {
    fn clone(&self) -> Self {
        Self {
            members: self.members.clone(),
        }
    }
}

impl<X> std::fmt::Debug for FunctionClass<X> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionClass")
            .field("len", &self.members.len())
            .finish()
    }
}

impl<X> FunctionClass<X> {
    pub fn new(members: Vec<Classifier<X>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "function class must be nonempty".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Classifier<X>] {
        &self.members
    }

    /// The deduplicated set `{(f(x_1), ..., f(x_n)) : f in class}`.
    pub fn project(&self, x: &[X]) -> Result<FiniteVertexSet> {
        let rows = self
            .members
            .iter()
            .map(|f| x.iter().map(|xi| f(xi)).collect())
            .collect();
        FiniteVertexSet::dedup_from(Alphabet::Binary, rows)
    }

    fn max_correlation(&self, eps: &[Outcome], point: impl Fn(usize) -> usize, x: &[X]) -> f64 {
        self.members
            .iter()
            .map(|f| {
                eps.iter()
                    .enumerate()
                    .map(|(t, &e)| (e * f(&x[point(t)])) as i64)
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0) as f64
    }
}

/// `phi(x; y) = min_f d_H(y, f(x)) + penalty`.
pub fn projection_phi<X: Send + Sync + 'static>(
    class: &FunctionClass<X>,
    horizon: usize,
    penalty: PenaltyConstant,
) -> Result<CovariatePotential<X>> {
    let class = class.clone();
    let p = penalty.value();
    CovariatePotential::new(horizon, move |x: &[X], y: &[Outcome]| {
        let best = class
            .members
            .iter()
            .map(|f| x.iter().zip(y).filter(|(xi, &yi)| f(xi) != yi).count())
            .min()
            .unwrap_or(y.len());
        best as f64 / y.len() as f64 + p
    })
}

/// A complete binary tree of depth `n` labelled by covariates, indexed as a
/// heap: the root is node 0 and the children of node `i` along `-1` and
/// `+1` are `2i + 1` and `2i + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicTree<X> {
    depth: usize,
    nodes: Vec<X>,
}

impl<X> DyadicTree<X> {
    pub fn new(depth: usize, nodes: Vec<X>) -> Result<Self> {
        if depth == 0 || depth > 20 {
            return Err(Error::InvalidArgument(format!(
                "tree depth must be in 1..=20, got {depth}"
            )));
        }
        let expected = (1usize << depth) - 1;
        if nodes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: nodes.len(),
            });
        }
        Ok(Self { depth, nodes })
    }

    /// Builds the tree from a function of the sign path leading to each node.
    pub fn from_fn(depth: usize, mut label: impl FnMut(&[Outcome]) -> X) -> Result<Self> {
        if depth == 0 || depth > 20 {
            return Err(Error::InvalidArgument(format!(
                "tree depth must be in 1..=20, got {depth}"
            )));
        }
        let mut nodes = Vec::with_capacity((1 << depth) - 1);
        let mut path = vec![0; depth];
        for level in 0..depth {
            for index in 0..1usize << level {
                Alphabet::Binary.decode(index, &mut path[..level]);
                nodes.push(label(&path[..level]));
            }
        }
        Ok(Self { depth, nodes })
    }

    pub fn constant(depth: usize, value: X) -> Result<Self>
    where
        X: Clone,
    {
        Self::from_fn(depth, |_| value.clone())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[X] {
        &self.nodes
    }

    /// Node indices `z_1, ..., z_n` visited along the sign path `eps`.
    pub fn path_indices(&self, eps: &[Outcome], out: &mut [usize]) {
        let mut i = 0;
        for t in 0..self.depth {
            out[t] = i;
            i = if eps[t] < 0 { 2 * i + 1 } else { 2 * i + 2 };
        }
    }
}

/// Sequential Rademacher complexity
/// `(1/(2n)) E sup_f sum_t eps_t f(z_t(eps_1..eps_{t-1}))` on a given tree.
pub fn sequential_rademacher<X: Sync>(
    tree: &DyadicTree<X>,
    class: &FunctionClass<X>,
    horizon: usize,
    mode: RademacherMode,
) -> Result<PenaltyConstant> {
    if tree.depth() != horizon {
        return Err(Error::DimensionMismatch {
            expected: horizon,
            got: tree.depth(),
        });
    }
    rademacher_mc(
        |eps| {
            let mut idx = vec![0; horizon];
            tree.path_indices(eps, &mut idx);
            class.max_correlation(eps, |t| idx[t], tree.nodes())
        },
        horizon,
        mode,
    )
}

/// Monte Carlo estimate of `E_x Rad(class|_x)` for i.i.d. covariates drawn
/// by `sample`.
pub fn class_rademacher<X, S>(
    class: &FunctionClass<X>,
    horizon: usize,
    sample: S,
    plan: MonteCarlo,
) -> Result<PenaltyConstant>
where
    S: Fn(&mut crate::random::StreamRng) -> X + Sync,
{
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    let est = plan.run(|rng| {
        let x: Vec<X> = (0..horizon).map(|_| sample(rng)).collect();
        let eps: Vec<Outcome> = (0..horizon).map(|_| rademacher(rng)).collect();
        class.max_correlation(&eps, |t| t, &x)
    })?;
    let scale = 1.0 / (2.0 * horizon as f64);
    PenaltyConstant::with_provenance(
        (scale * est.mean).max(0.0),
        PenaltyProvenance::MonteCarlo {
            samples: plan.samples,
            seed: plan.seed,
            half_width: scale * est.half_width,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::philib::finite_set_phi;

    fn two_point_cube() -> FunctionClass<u8> {
        let all: Vec<Classifier<u8>> = [(-1i8, -1i8), (-1, 1), (1, -1), (1, 1)]
            .into_iter()
            .map(|(a, b)| Arc::new(move |x: &u8| if *x == 0 { a } else { b }) as Classifier<u8>)
            .collect();
        FunctionClass::new(all).unwrap()
    }

    #[test]
    fn constant_class_is_singleton_hamming() {
        let class = FunctionClass::new(vec![Arc::new(|_: &f64| 1i8) as Classifier<f64>]).unwrap();
        let phi = projection_phi(&class, 3, PenaltyConstant::zero()).unwrap();
        let set = FiniteVertexSet::new(Alphabet::Binary, vec![vec![1, 1, 1]]).unwrap();
        let reference = finite_set_phi(&set, PenaltyConstant::zero()).unwrap();
        crate::sequence::for_each_sequence(Alphabet::Binary, 3, |_, y| {
            assert_eq!(phi.eval(&[0.1, 0.5, 0.9], y), reference.eval(y));
        });
    }

    #[test]
    fn realizable_labels_cost_only_the_penalty() {
        let class = FunctionClass::new(vec![threshold(0.3), threshold(0.7)]).unwrap();
        let pen = PenaltyConstant::analytic(0.125).unwrap();
        let phi = projection_phi(&class, 4, pen).unwrap();
        let x = [0.1, 0.4, 0.6, 0.9];
        let y: Vec<Outcome> = x.iter().map(|v| class.members()[0](v)).collect();
        assert_eq!(phi.eval(&x, &y), 0.125);
        let doubled =
            FunctionClass::new(vec![threshold(0.3), threshold(0.3), threshold(0.7)]).unwrap();
        let phi2 = projection_phi(&doubled, 4, pen).unwrap();
        crate::sequence::for_each_sequence(Alphabet::Binary, 4, |_, y| {
            assert_eq!(phi.eval(&x, y), phi2.eval(&x, y));
        });
        assert_eq!(doubled.project(&x).unwrap().len(), 2);
    }

    #[test]
    fn tree_layout() {
        let tree = DyadicTree::from_fn(3, |p| p.len() * 10 + p.iter().filter(|&&e| e > 0).count())
            .unwrap();
        let mut idx = [0; 3];
        tree.path_indices(&[1, -1, 1], &mut idx);
        assert_eq!(idx, [0, 2, 5]);
        assert_eq!(tree.nodes()[5], 21);
        assert!(DyadicTree::new(2, vec![0u8; 4]).is_err());
    }

    #[test]
    fn constant_tree_matches_projected_set() {
        let class = two_point_cube();
        let tree = DyadicTree::constant(3, 1u8).unwrap();
        let seq = sequential_rademacher(&tree, &class, 3, RademacherMode::Exhaustive).unwrap();
        let proj = class
            .project(&[1, 1, 1])
            .unwrap()
            .rademacher(RademacherMode::Exhaustive)
            .unwrap();
        assert_eq!(seq.value(), proj.value());
    }

    #[test]
    fn full_class_on_separating_tree_is_one_half() {
        let class = two_point_cube();
        let tree = DyadicTree::from_fn(2, |p| p.len() as u8).unwrap();
        let r = sequential_rademacher(&tree, &class, 2, RademacherMode::Exhaustive).unwrap();
        assert!((r.value() - 0.5).abs() < 1e-15);
        assert!(sequential_rademacher(&tree, &class, 3, RademacherMode::Exhaustive).is_err());
    }

    #[test]
    fn single_function_is_zero() {
        let class = FunctionClass::new(vec![threshold(0.5)]).unwrap();
        let tree = DyadicTree::from_fn(6, |p| p.len() as f64 / 6.0).unwrap();
        let r = sequential_rademacher(&tree, &class, 6, RademacherMode::Exhaustive).unwrap();
        assert!(r.value().abs() < 1e-15);
        let c = class_rademacher(
            &class,
            10,
            rand::Rng::random::<f64>,
            MonteCarlo::new(5000, 1),
        )
        .unwrap();
        assert!(c.value() <= c.half_width());
    }
}
