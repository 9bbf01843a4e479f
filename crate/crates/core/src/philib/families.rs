use super::sets::FiniteVertexSet;
use crate::error::{Error, Result};
use crate::graphopt::WeightedGraph;
use crate::sequence::{Alphabet, Outcome};

/// All binary sequences of length `n` obtained by repeating a block of
/// length at most `max_period`, deduplicated.
pub fn pattern_family(n: usize, max_period: usize) -> Result<FiniteVertexSet> {
    if n == 0 || max_period == 0 || max_period > n {
        return Err(Error::InvalidArgument(format!(
            "pattern family needs 1 <= p <= n, got n = {n}, p = {max_period}"
        )));
    }
    if max_period > 20 {
        return Err(Error::HorizonTooLarge {
            horizon: max_period,
            limit: "period <= 20".into(),
        });
    }
    let mut members = Vec::new();
    let mut block = vec![0; max_period];
    for p in 1..=max_period {
        for index in 0..1usize << p {
            Alphabet::Binary.decode(index, &mut block[..p]);
            members.push((0..n).map(|t| block[t % p]).collect::<Vec<Outcome>>());
        }
    }
    FiniteVertexSet::dedup_from(Alphabet::Binary, members)
}

/// Labelings that are `+1` on the hop ball of radius `radius` around some
/// vertex and `-1` elsewhere. With `flip` set the signs are reversed.
pub fn ball_family(graph: &WeightedGraph, radius: usize, flip: bool) -> Result<FiniteVertexSet> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::Graph("ball family needs a nonempty graph".into()));
    }
    let (inside, outside): (Outcome, Outcome) = if flip { (-1, 1) } else { (1, -1) };
    let members = (0..n)
        .map(|v| {
            graph
                .hop_distances(v)
                .into_iter()
                .map(|d| match d {
                    Some(d) if d <= radius => inside,
                    _ => outside,
                })
                .collect()
        })
        .collect();
    FiniteVertexSet::dedup_from(Alphabet::Binary, members)
}
