//! Outcome alphabets, sequence prefixes, and exhaustive enumeration of `[k]^n`.
//!
//! Binary outcomes are `-1`/`+1`; k-ary outcomes are the labels `1..=k`.
//! Enumeration uses the first coordinate as the most significant digit, so
//! every prefix owns a contiguous block of sequence indices.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A single revealed outcome.
pub type Outcome = i8;

/// Largest horizon for which binary oracles enumerate the whole cube.
pub const MAX_EXHAUSTIVE_BINARY_HORIZON: usize = 20;

/// Largest number of sequences enumerated for k-ary alphabets (and for
/// exhaustive averaging over future tails).
pub const MAX_EXHAUSTIVE_SEQUENCES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    /// Outcomes in `{-1, +1}`.
    Binary,
    /// Outcomes in `{1, ..., k}`.
    Labels(u8),
}

impl Alphabet {
    pub fn labels(k: usize) -> Result<Self> {
        if !(2..=i8::MAX as usize).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "alphabet size must be in [2, 127], got {k}"
            )));
        }
        Ok(Alphabet::Labels(k as u8))
    }

    pub fn size(self) -> usize {
        match self {
            Alphabet::Binary => 2,
            Alphabet::Labels(k) => k as usize,
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Alphabet::Binary)
    }

    /// Symbol for enumeration digit `d` (binary: 0 -> -1, 1 -> +1).
    #[inline]
    pub fn symbol(self, digit: usize) -> Outcome {
        match self {
            Alphabet::Binary => {
                if digit == 0 {
                    -1
                } else {
                    1
                }
            }
            Alphabet::Labels(_) => (digit + 1) as Outcome,
        }
    }

    /// Inverse of [`Alphabet::symbol`].
    #[inline]
    pub fn digit(self, symbol: Outcome) -> Option<usize> {
        match self {
            Alphabet::Binary => match symbol {
                -1 => Some(0),
                1 => Some(1),
                _ => None,
            },
            Alphabet::Labels(k) => {
                if symbol >= 1 && symbol as i16 <= k as i16 {
                    Some(symbol as usize - 1)
                } else {
                    None
                }
            }
        }
    }

    pub fn contains(self, symbol: Outcome) -> bool {
        self.digit(symbol).is_some()
    }

    pub fn symbols(self) -> impl Iterator<Item = Outcome> {
        (0..self.size()).map(move |d| self.symbol(d))
    }

    pub fn validate(self, outcomes: &[Outcome]) -> Result<()> {
        match outcomes.iter().find(|&&s| !self.contains(s)) {
            Some(&bad) => Err(Error::InvalidOutcome {
                value: bad as i64,
                alphabet: self.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Number of sequences of length `n`, if it fits in `usize`.
    pub fn count(self, n: usize) -> Option<usize> {
        let k = self.size();
        (0..n).try_fold(1usize, |acc, _| acc.checked_mul(k))
    }

    /// Number of sequences of length `n`, provided exhaustive enumeration
    /// is within the desk-scale caps.
    pub fn exhaustive_count(self, n: usize) -> Result<usize> {
        match self {
            Alphabet::Binary if n > MAX_EXHAUSTIVE_BINARY_HORIZON => Err(Error::HorizonTooLarge {
                horizon: n,
                limit: format!("n <= {MAX_EXHAUSTIVE_BINARY_HORIZON}"),
            }),
            Alphabet::Binary => Ok(1usize << n),
            Alphabet::Labels(_) => match self.count(n) {
                Some(c) if c <= MAX_EXHAUSTIVE_SEQUENCES => Ok(c),
                _ => Err(Error::HorizonTooLarge {
                    horizon: n,
                    limit: format!("k^n <= {MAX_EXHAUSTIVE_SEQUENCES}"),
                }),
            },
        }
    }

    /// Count of future tails of length `remaining`, capped at
    /// [`MAX_EXHAUSTIVE_SEQUENCES`].
    pub fn tail_count(self, remaining: usize) -> Result<usize> {
        match self.count(remaining) {
            Some(c) if c <= MAX_EXHAUSTIVE_SEQUENCES => Ok(c),
            _ => Err(Error::HorizonTooLarge {
                horizon: remaining,
                limit: format!("remaining k^(n-t) <= {MAX_EXHAUSTIVE_SEQUENCES}"),
            }),
        }
    }

    /// Writes the sequence with enumeration index `index` into `out`.
    #[inline]
    pub fn decode(self, mut index: usize, out: &mut [Outcome]) {
        let k = self.size();
        for slot in out.iter_mut().rev() {
            *slot = self.symbol(index % k);
            index /= k;
        }
    }

    /// Enumeration index of `seq`. Panics on symbols outside the alphabet.
    #[inline]
    pub fn encode(self, seq: &[Outcome]) -> usize {
        let k = self.size();
        seq.iter().fold(0usize, |acc, &s| {
            acc * k + self.digit(s).expect("symbol outside alphabet")
        })
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Binary => write!(f, "{{-1,+1}}"),
            Alphabet::Labels(k) => write!(f, "{{1..{k}}}"),
        }
    }
}

/// Outcomes observed so far, together with the horizon they belong to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencePrefix {
    alphabet: Alphabet,
    horizon: usize,
    outcomes: Vec<Outcome>,
}

impl SequencePrefix {
    pub fn new(alphabet: Alphabet, horizon: usize, outcomes: Vec<Outcome>) -> Result<Self> {
        if outcomes.len() > horizon {
            return Err(Error::PrefixTooLong {
                len: outcomes.len(),
                horizon,
            });
        }
        alphabet.validate(&outcomes)?;
        Ok(Self {
            alphabet,
            horizon,
            outcomes,
        })
    }

    pub fn empty(alphabet: Alphabet, horizon: usize) -> Self {
        Self {
            alphabet,
            horizon,
            outcomes: Vec::new(),
        }
    }

    pub fn push(&mut self, outcome: Outcome) -> Result<()> {
        if self.outcomes.len() == self.horizon {
            return Err(Error::PrefixTooLong {
                len: self.outcomes.len() + 1,
                horizon: self.horizon,
            });
        }
        self.alphabet.validate(&[outcome])?;
        self.outcomes.push(outcome);
        Ok(())
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_complete(&self) -> bool {
        self.outcomes.len() == self.horizon
    }
}

/// Calls `f(index, sequence)` for every sequence in `[k]^n`, in index order.
pub fn for_each_sequence(alphabet: Alphabet, n: usize, mut f: impl FnMut(usize, &[Outcome])) {
    let total = alphabet.count(n).expect("sequence count overflow");
    let mut buf = vec![alphabet.symbol(0); n];
    for index in 0..total {
        alphabet.decode(index, &mut buf);
        f(index, &buf);
    }
}
