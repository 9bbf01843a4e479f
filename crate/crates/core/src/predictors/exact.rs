use super::{finish_binary_mean, waterfill};
use crate::error::{Error, Result};
use crate::forecast::{Forecast, Forecaster};
use crate::potential::PotentialFunction;
use crate::sequence::{Alphabet, Outcome};

/// The exact forecaster, with the conditional mean of phi tabulated for
/// every prefix.
///
/// `levels[t][p]` is `E[phi(y)]` over uniform `y_{t+1..n}` given that the
/// first `t` outcomes have enumeration index `p`. Building the table costs
/// one evaluation of phi per sequence.
#[derive(Clone, Debug)]
pub struct ExactPredictor {
    alphabet: Alphabet,
    horizon: usize,
    levels: Vec<Vec<f64>>,
    clamp: bool,
}

impl ExactPredictor {
    pub fn new(phi: &PotentialFunction) -> Result<Self> {
        let alphabet = phi.alphabet();
        let n = phi.horizon();
        let k = alphabet.size();
        let mut levels = Vec::with_capacity(n + 1);
        levels.push(phi.values()?);
        for _ in 0..n {
            let below = levels.last().expect("non-empty");
            let above: Vec<f64> = below
                .chunks_exact(k)
                .map(|c| c.iter().sum::<f64>() / k as f64)
                .collect();
            levels.push(above);
        }
        levels.reverse();
        Ok(Self {
            alphabet,
            horizon: n,
            levels,
            clamp: true,
        })
    }

    /// Disables clipping of binary means; out-of-range means become errors.
    pub fn strict(mut self) -> Self {
        self.clamp = false;
        self
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// `E[phi]` under the uniform distribution.
    pub fn mean(&self) -> f64 {
        self.levels[0][0]
    }

    pub fn conditional_mean(&self, prefix: &[Outcome]) -> Result<f64> {
        if prefix.len() > self.horizon {
            return Err(Error::PrefixTooLong {
                len: prefix.len(),
                horizon: self.horizon,
            });
        }
        self.alphabet.validate(prefix)?;
        Ok(self.levels[prefix.len()][self.alphabet.encode(prefix)])
    }

    /// Unclipped binary mean, or the scores `-n E phi(prefix, j, .)` fed to
    /// water-filling for k-ary alphabets.
    fn child_scores(&self, t: usize, index: usize) -> impl Iterator<Item = f64> + '_ {
        let k = self.alphabet.size();
        let n = self.horizon as f64;
        self.levels[t + 1][index * k..(index + 1) * k]
            .iter()
            .map(move |v| -n * v)
    }

    /// Forecast for a prefix of length `t` with enumeration index `index`.
    pub fn forecast_by_index(&self, t: usize, index: usize) -> Result<Forecast> {
        let scores: Vec<f64> = self.child_scores(t, index).collect();
        match self.alphabet {
            // scores = (-n E[.., -1], -n E[.., +1])
            Alphabet::Binary => finish_binary_mean(scores[1] - scores[0], self.clamp),
            Alphabet::Labels(_) => Ok(Forecast::Distribution(waterfill(&scores)?)),
        }
    }

    /// Expected mistake rate on every sequence, indexed by enumeration order.
    pub fn expected_mistakes_all(&self) -> Result<Vec<f64>> {
        let k = self.alphabet.size();
        let mut loss = vec![0.0];
        for t in 0..self.horizon {
            let mut next = vec![0.0; loss.len() * k];
            for (index, &so_far) in loss.iter().enumerate() {
                let f = self.forecast_by_index(t, index)?;
                for d in 0..k {
                    next[index * k + d] =
                        so_far + f.mistake_probability(self.alphabet.symbol(d))?;
                }
            }
            loss = next;
        }
        let n = self.horizon as f64;
        Ok(loss.into_iter().map(|l| l / n).collect())
    }
}

impl Forecaster for ExactPredictor {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn forecast(&self, prefix: &[Outcome]) -> Result<Forecast> {
        if prefix.len() >= self.horizon {
            return Err(Error::PrefixTooLong {
                len: prefix.len(),
                horizon: self.horizon,
            });
        }
        self.alphabet.validate(prefix)?;
        self.forecast_by_index(prefix.len(), self.alphabet.encode(prefix))
    }
}
