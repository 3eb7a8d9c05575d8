//! Entangled graphs: parsing, canonical storage, per-pair
//! statistics and DOT rendering.
//!
//! Vertices are 1-based, matching qubit numbering. An edge `(i, j)` is always
//! stored with `i < j`.
//!
//! The text format is a vertex count on the first meaningful line followed by
//! one `i j` pair per line. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

/// An edge between two vertices, stored canonically with `.0 < .1`.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed header, expected a single positive vertex count")]
    BadHeader { line: usize },
    #[error("missing header line with the vertex count")]
    MissingHeader,
    #[error("line {line}: expected two integers \"i j\", found {found:?}")]
    BadEdgeLine { line: usize, found: String },
    #[error("line {line}: non-integer token {token:?}")]
    NotAnInteger { line: usize, token: String },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("pair ({0}, {1}) must satisfy i < j")]
    UnorderedPair(usize, usize),
    #[error("label given for ({0}, {1}), which is not an edge")]
    LabelOnNonEdge(usize, usize),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("line {0}: {1}")]
    Line(usize, #[source] Box<GraphError>),
}

impl GraphError {
    /// Line number in the source text, when the error came from parsing.
    pub fn line(&self) -> Option<usize> {
        match self {
            GraphError::BadHeader { line }
            | GraphError::BadEdgeLine { line, .. }
            | GraphError::NotAnInteger { line, .. }
            | GraphError::Line(line, _) => Some(*line),
            _ => None,
        }
    }
}

/// Vertex count plus a canonical edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntangledGraph {
    n_vertices: usize,
    edges: BTreeSet<Edge>,
}

impl EntangledGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Self {
            n_vertices: n,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a graph from edges given in either orientation. Reversed
    /// duplicates (`(2, 1)` after `(1, 2)`) are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for (a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))))
    }

    /// Star with the given hub connected to every other vertex.
    pub fn star(n: usize, hub: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..=n).filter(|&v| v != hub).map(|v| (hub, v)))
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..n).map(|v| (v, v + 1)))
    }

    /// Graph whose edge set is selected by the bits of `mask`, where bit `t`
    /// corresponds to the `t`-th pair in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self, GraphError> {
        let pairs = all_pairs(n);
        Self::new(
            n,
            pairs
                .into_iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, p)| p),
        )
    }

    fn insert_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.n_vertices;
        for v in [a, b] {
            if v == 0 || v > n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        let e = (a.min(b), a.max(b));
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge(e.0, e.1));
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Relabels vertex `v` as `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        Self::new(
            self.n_vertices,
            self.edges.iter().map(|&(a, b)| (perm[a - 1], perm[b - 1])),
        )
    }

    /// If the graph is a star on all vertices (n >= 3), returns the hub.
    pub fn star_hub(&self) -> Option<usize> {
        let n = self.n_vertices;
        if n < 3 || self.edge_count() != n - 1 {
            return None;
        }
        (1..=n).find(|&h| self.degree(h) == n - 1)
    }

    /// Writes the graph in the text file format accepted by [`parse_graph`].
    pub fn serialize(&self) -> String {
        let mut out = format!("{}\n", self.n_vertices);
        for (a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}

/// All pairs `(i, j)` with `1 <= i < j <= n` in lexicographic order.
pub fn all_pairs(n: usize) -> Vec<Edge> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect()
}

fn parse_int(tok: &str, line: usize) -> Result<usize, GraphError> {
    tok.parse::<usize>().map_err(|_| GraphError::NotAnInteger {
        line,
        token: tok.to_string(),
    })
}

pub fn parse_graph(text: &str) -> Result<EntangledGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, l)| (idx + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::MissingHeader)?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 1 {
        return Err(GraphError::BadHeader { line: hline });
    }
    let n = parse_int(toks[0], hline)?;
    if n == 0 {
        return Err(GraphError::BadHeader { line: hline });
    }

    let mut g = EntangledGraph::empty(n)?;
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(GraphError::BadEdgeLine {
                line,
                found: l.to_string(),
            });
        }
        let a = parse_int(toks[0], line)?;
        let b = parse_int(toks[1], line)?;
        g.insert_edge(a, b)
            .map_err(|e| GraphError::Line(line, Box::new(e)))?;
    }
    Ok(g)
}

/// Degree and common-neighbour counts for one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub pair: Edge,
    pub n_i: usize,
    pub n_j: usize,
    pub n_ij: usize,
    pub k: usize,
    pub is_edge: bool,
}

impl GraphStats {
    /// Checks the inequality block that applies to this pair's edge status.
    ///
    /// Edge pairs: `1 <= n_i, n_j <= k`, `n_ij <= (k-1)/2`,
    /// `2 <= n_i + n_j <= k + 1`, `1 <= n_i n_j <= (k+1)^2 / 4`.
    /// Non-edge pairs: `n_i, n_j <= k`, `2 n_ij <= k`, `n_i + n_j <= k`,
    /// `4 n_i n_j <= k^2`.
    pub fn satisfies_bounds(&self) -> bool {
        let (ni, nj, nij, k) = (self.n_i, self.n_j, self.n_ij, self.k);
        if self.is_edge {
            (1..=k).contains(&ni)
                && (1..=k).contains(&nj)
                && k >= 1
                && nij <= (k - 1) / 2
                && (2..=k + 1).contains(&(ni + nj))
                && ni * nj >= 1
                && 4 * ni * nj <= (k + 1) * (k + 1)
        } else {
            ni <= k && nj <= k && 2 * nij <= k && ni + nj <= k && 4 * ni * nj <= k * k
        }
    }
}

pub fn graph_stats(g: &EntangledGraph, i: usize, j: usize) -> Result<GraphStats, GraphError> {
    let n = g.n_vertices();
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
    }
    if i >= j {
        return Err(GraphError::UnorderedPair(i, j));
    }
    let ni = g.neighbors(i);
    let nj = g.neighbors(j);
    Ok(GraphStats {
        pair: (i, j),
        n_i: ni.len(),
        n_j: nj.len(),
        n_ij: ni.intersection(&nj).count(),
        k: g.edge_count(),
        is_edge: g.has_edge(i, j),
    })
}

/// Renders the graph as undirected DOT. Edge labels, when given, are printed
/// with four decimals.
pub fn emit_dot(
    g: &EntangledGraph,
    labels: Option<&BTreeMap<Edge, f64>>,
) -> Result<String, GraphError> {
    if let Some(labels) = labels {
        if let Some(&(a, b)) = labels.keys().find(|e| !g.edges().contains(e)) {
            return Err(GraphError::LabelOnNonEdge(a, b));
        }
    }
    let mut out = String::from("graph G {\n");
    for v in 1..=g.n_vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for e @ (a, b) in g.edges() {
        match labels.and_then(|l| l.get(e)) {
            Some(x) => {
                let _ = writeln!(out, "  {a} -- {b} [label=\"{x:.4}\"];");
            }
            None => {
                let _ = writeln!(out, "  {a} -- {b};");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
