use std::collections::HashSet;
use std::sync::Arc;

use super::rademacher::{rademacher_mc, RademacherMode};
use super::PenaltyConstant;
use crate::error::{Error, Result};
use crate::potential::PotentialFunction;
use crate::sequence::{Alphabet, Outcome};

/// A nonempty set of distinct vertices of the cube, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteVertexSet {
    horizon: usize,
    alphabet: Alphabet,
    data: Arc<Vec<Outcome>>,
}

impl FiniteVertexSet {
    /// Builds the set, rejecting duplicates, empty input and invalid outcomes.
    pub fn new(alphabet: Alphabet, members: Vec<Vec<Outcome>>) -> Result<Self> {
        Self::build(alphabet, members, false)
    }

    /// Like [`FiniteVertexSet::new`] but silently drops repeated members.
    pub fn dedup_from(alphabet: Alphabet, members: Vec<Vec<Outcome>>) -> Result<Self> {
        Self::build(alphabet, members, true)
    }

    fn build(alphabet: Alphabet, members: Vec<Vec<Outcome>>, dedup: bool) -> Result<Self> {
        let horizon = members
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("vertex set must be nonempty".into()))?;
        if horizon == 0 {
            return Err(Error::InvalidArgument(
                "vertices must have positive length".into(),
            ));
        }
        let mut seen = HashSet::with_capacity(members.len());
        let mut data = Vec::with_capacity(members.len() * horizon);
        for (i, m) in members.into_iter().enumerate() {
            if m.len() != horizon {
                return Err(Error::LengthMismatch {
                    expected: horizon,
                    got: m.len(),
                });
            }
            alphabet.validate(&m)?;
            if !seen.insert(m.clone()) {
                if dedup {
                    continue;
                }
                return Err(Error::InvalidArgument(format!("member {i} is a duplicate")));
            }
            data.extend_from_slice(&m);
        }
        Ok(Self {
            horizon,
            alphabet,
            data: Arc::new(data),
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.horizon
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &[Outcome]> {
        self.data.chunks_exact(self.horizon)
    }

    /// Normalized Hamming distance from `y` to the nearest member.
    pub fn hamming_distance(&self, y: &[Outcome]) -> f64 {
        let best = self
            .members()
            .map(|m| m.iter().zip(y).filter(|(a, b)| a != b).count())
            .min()
            .unwrap_or(self.horizon);
        best as f64 / self.horizon as f64
    }

    /// `max_{w in F} <eps, w>` for sign vectors over a binary set.
    pub fn max_inner(&self, eps: &[Outcome]) -> f64 {
        self.members()
            .map(|m| {
                m.iter()
                    .zip(eps)
                    .map(|(&a, &b)| (a * b) as i64)
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0) as f64
    }

    /// Rademacher average of a binary set.
    pub fn rademacher(&self, mode: RademacherMode) -> Result<PenaltyConstant> {
        if !self.alphabet.is_binary() {
            return Err(Error::AlphabetMismatch {
                expected: Alphabet::Binary.to_string(),
                found: self.alphabet.to_string(),
            });
        }
        rademacher_mc(|eps| self.max_inner(eps), self.horizon, mode)
    }
}

/// `phi(y) = d_H(y, F) + penalty`.
pub fn finite_set_phi(
    set: &FiniteVertexSet,
    penalty: PenaltyConstant,
) -> Result<PotentialFunction> {
    let set = set.clone();
    let p = penalty.value();
    PotentialFunction::new(set.horizon(), set.alphabet(), move |y| {
        set.hamming_distance(y) + p
    })
}
