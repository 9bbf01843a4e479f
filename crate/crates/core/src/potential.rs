//! Potential functions: total real-valued maps on full outcome sequences.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Outcome};

type Evaluator = dyn Fn(&[Outcome]) -> f64 + Send + Sync;
type CovariateEvaluator<X> = dyn Fn(&[X], &[Outcome]) -> f64 + Send + Sync;

/// A pure, deterministic potential `phi : [k]^n -> R`.
///
/// Cloning is cheap; the evaluator is shared.
#[derive(Clone)]
pub struct PotentialFunction {
    horizon: usize,
    alphabet: Alphabet,
    eval: Arc<Evaluator>,
}

impl PotentialFunction {
    pub fn new<F>(horizon: usize, alphabet: Alphabet, eval: F) -> Result<Self>
    where
        F: Fn(&[Outcome]) -> f64 + Send + Sync + 'static,
    {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(Self {
            horizon,
            alphabet,
            eval: Arc::new(eval),
        })
    }

    pub fn constant(horizon: usize, alphabet: Alphabet, value: f64) -> Result<Self> {
        Self::new(horizon, alphabet, move |_| value)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Evaluates without validation. `y` must be a full sequence.
    #[inline]
    pub fn eval(&self, y: &[Outcome]) -> f64 {
        debug_assert_eq!(y.len(), self.horizon);
        (self.eval)(y)
    }

    /// Evaluates after checking length and alphabet; rejects non-finite values.
    pub fn try_eval(&self, y: &[Outcome]) -> Result<f64> {
        if y.len() != self.horizon {
            return Err(Error::LengthMismatch {
                expected: self.horizon,
                got: y.len(),
            });
        }
        self.alphabet.validate(y)?;
        let v = (self.eval)(y);
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                value: v,
                sequence: y.to_vec(),
            });
        }
        Ok(v)
    }

    /// Values on every sequence, in enumeration order.
    pub fn values(&self) -> Result<Vec<f64>> {
        let count = self.alphabet.exhaustive_count(self.horizon)?;
        let n = self.horizon;
        let alphabet = self.alphabet;
        let values: Vec<f64> = (0..count)
            .into_par_iter()
            .map_init(
                || vec![alphabet.symbol(0); n],
                |buf, index| {
                    alphabet.decode(index, buf);
                    (self.eval)(buf)
                },
            )
            .collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            let mut seq = vec![0; n];
            alphabet.decode(i, &mut seq);
            return Err(Error::NonFiniteValue {
                value: values[i],
                sequence: seq,
            });
        }
        Ok(values)
    }

    /// Memoizes every value in a table. Only valid for pure evaluators.
    pub fn tabulate(&self) -> Result<PotentialFunction> {
        let table = Arc::new(self.values()?);
        let alphabet = self.alphabet;
        Self::new(self.horizon, alphabet, move |y| table[alphabet.encode(y)])
    }

    /// Views a binary potential as a 2-label potential, mapping label 1 to
    /// `-1` and label 2 to `+1`.
    pub fn as_labels(&self) -> Result<PotentialFunction> {
        if !self.alphabet.is_binary() {
            return Err(Error::AlphabetMismatch {
                expected: Alphabet::Binary.to_string(),
                found: self.alphabet.to_string(),
            });
        }
        let inner = self.eval.clone();
        Self::new(self.horizon, Alphabet::Labels(2), move |y| {
            let mapped: Vec<Outcome> = y.iter().map(|&l| if l == 1 { -1 } else { 1 }).collect();
            inner(&mapped)
        })
    }

    /// Adds a constant to every value.
    pub fn shifted(&self, offset: f64) -> PotentialFunction {
        let inner = self.eval.clone();
        Self {
            horizon: self.horizon,
            alphabet: self.alphabet,
            eval: Arc::new(move |y| inner(y) + offset),
        }
    }
}

impl fmt::Debug for PotentialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialFunction")
            .field("horizon", &self.horizon)
            .field("alphabet", &self.alphabet)
            .finish_non_exhaustive()
    }
}

/// A binary potential that also depends on a covariate sequence
/// `x_1..x_n`: `phi(x; y)`.
pub struct CovariatePotential<X> {
    horizon: usize,
    eval: Arc<CovariateEvaluator<X>>,
}

impl<X> Clone for CovariatePotential<X> {
    fn clone(&self) -> Self {
        Self {
            horizon: self.horizon,
            eval: self.eval.clone(),
        }
    }
}

impl<X: Send + Sync + 'static> CovariatePotential<X> {
    pub fn new<F>(horizon: usize, eval: F) -> Result<Self>
    where
        F: Fn(&[X], &[Outcome]) -> f64 + Send + Sync + 'static,
    {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(Self {
            horizon,
            eval: Arc::new(eval),
        })
    }

    /// A covariate potential that ignores `x`.
    pub fn ignoring_covariates(phi: &PotentialFunction) -> Result<Self> {
        if !phi.alphabet().is_binary() {
            return Err(Error::AlphabetMismatch {
                expected: Alphabet::Binary.to_string(),
                found: phi.alphabet().to_string(),
            });
        }
        let phi = phi.clone();
        Self::new(phi.horizon(), move |_, y| phi.eval(y))
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    #[inline]
    pub fn eval(&self, x: &[X], y: &[Outcome]) -> f64 {
        debug_assert_eq!(x.len(), self.horizon);
        debug_assert_eq!(y.len(), self.horizon);
        (self.eval)(x, y)
    }

    /// Fixes the covariate sequence, yielding an ordinary binary potential.
    pub fn with_covariates(&self, x: Vec<X>) -> Result<PotentialFunction> {
        if x.len() != self.horizon {
            return Err(Error::LengthMismatch {
                expected: self.horizon,
                got: x.len(),
            });
        }
        let eval = self.eval.clone();
        PotentialFunction::new(self.horizon, Alphabet::Binary, move |y| eval(&x, y))
    }
}

impl<X> fmt::Debug for CovariatePotential<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CovariatePotential")
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn try_eval_checks_inputs() {
        let phi = PotentialFunction::new(2, Alphabet::Binary, |y| y[0] as f64).unwrap();
        assert!(phi.try_eval(&[1]).is_err());
        assert!(phi.try_eval(&[1, 2]).is_err());
        assert_eq!(phi.try_eval(&[1, -1]).unwrap(), 1.0);
        let bad = PotentialFunction::new(1, Alphabet::Binary, |_| f64::NAN).unwrap();
        assert!(matches!(
            bad.try_eval(&[1]),
            Err(Error::NonFiniteValue { .. })
        ));
        assert!(bad.values().is_err());
    }

    #[test]
    fn tabulated_agrees() {
        let phi =
            PotentialFunction::new(5, Alphabet::Binary, |y| y.iter().map(|&v| v as f64).sum())
                .unwrap();
        let tab = phi.tabulate().unwrap();
        crate::sequence::for_each_sequence(Alphabet::Binary, 5, |_, y| {
            assert_eq!(phi.eval(y), tab.eval(y));
        });
    }

    #[test]
    fn label_view_maps_two_to_plus() {
        let phi = PotentialFunction::new(1, Alphabet::Binary, |y| y[0] as f64).unwrap();
        let lab = phi.as_labels().unwrap();
        assert_eq!(lab.eval(&[1]), -1.0);
        assert_eq!(lab.eval(&[2]), 1.0);
    }
}
