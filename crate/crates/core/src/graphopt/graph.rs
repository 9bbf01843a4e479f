use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::random::{stream_rng, Stream};

/// An undirected graph with edge weights in `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Validates and normalizes the edges so that `u < v`.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && (-1.0..=1.0).contains(&w)) {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) has weight {w} outside [-1, 1]"
                )));
            }
            let (a, b) = (u.min(v), u.max(v));
            if !seen.insert((a, b)) {
                return Err(Error::Graph(format!("duplicate edge ({a}, {b})")));
            }
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
            normalized.push((a, b, w));
        }
        Ok(Self {
            n,
            edges: normalized,
            adjacency,
        })
    }

    /// Parses an edge list: one `u v [w]` per line, `#` starts a comment,
    /// and an optional `n <count>` header fixes the vertex count.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        let mut seen_edge = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_id = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("expected a vertex id, found {s:?}"),
                })
            };
            if fields[0] == "n" {
                if seen_edge || declared.is_some() || fields.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "the `n <count>` header must appear once, before any edge".into(),
                    });
                }
                declared = Some(parse_id(fields[1])?);
                continue;
            }
            if !(2..=3).contains(&fields.len()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v [w]`, found {} fields", fields.len()),
                });
            }
            let (u, v) = (parse_id(fields[0])?, parse_id(fields[1])?);
            let w = match fields.get(2) {
                Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("expected a weight, found {s:?}"),
                })?,
                None => 1.0,
            };
            edges.push((line_no, u, v, w));
            seen_edge = true;
        }
        let n = declared.unwrap_or_else(|| {
            edges
                .iter()
                .map(|&(_, u, v, _)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
        });
        let mut graph_edges = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for (line, u, v, w) in edges {
            let fail = |message: String| Error::Parse { line, message };
            if u >= n || v >= n {
                return Err(fail(format!("vertex id out of range 0..{n}")));
            }
            if u == v {
                return Err(fail(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && (-1.0..=1.0).contains(&w)) {
                return Err(fail(format!("weight {w} outside [-1, 1]")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(fail(format!("duplicate edge ({u}, {v})")));
            }
            graph_edges.push((u, v, w));
        }
        Self::new(n, graph_edges)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse_edge_list(&text)
    }

    /// Serializes in the format read by [`WeightedGraph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v, w) in &self.edges {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i, 1.0)).collect()).expect("valid path")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Graph("a cycle needs at least 3 vertices".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect())
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1.0)).collect()).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v, 1.0)))
            .collect();
        Self::new(n, edges).expect("valid complete graph")
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1), 1.0));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c), 1.0));
                }
            }
        }
        Self::new(rows * cols, edges).expect("valid grid")
    }

    /// Erdos-Renyi graph with unit weights, each edge negated with
    /// probability `negative`.
    pub fn random(n: usize, p: f64, negative: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&negative) {
            return Err(Error::InvalidArgument(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let mut rng = stream_rng(seed, n as u64, Stream::Sample);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    let w = if rng.random::<f64>() < negative {
                        -1.0
                    } else {
                        1.0
                    };
                    edges.push((u, v, w));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn has_negative_weights(&self) -> bool {
        self.edges.iter().any(|e| e.2 < 0.0)
    }

    /// Hop distances from `source` along nonzero-weight edges.
    pub fn hop_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        if source >= self.n {
            return dist;
        }
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &(v, w) in &self.adjacency[u] {
                if w != 0.0 && dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Number of edges whose endpoints carry different labels.
    pub fn cut_edges(&self, y: &[crate::sequence::Outcome]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v, w)| w != 0.0 && y[u] != y[v])
            .count()
    }
}
