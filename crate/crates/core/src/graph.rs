//! Immutable simple undirected graphs in compressed adjacency form, plus
//! the edge-list and DIMACS text formats.
//!
//! Vertices are `0..n`. Every [`Graph`] is canonical: neighbor lists are
//! sorted ascending and the edge list is sorted lexicographically with
//! `u < v`, so two graphs with the same edge set compare equal and serialize
//! to the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("SelfLoop: vertex {0} is joined to itself")]
    SelfLoop(Vertex),
    #[error("DuplicateEdge: edge ({0}, {1}) listed more than once")]
    DuplicateEdge(Vertex, Vertex),
    #[error("VertexOutOfRange: vertex {vertex} not in 0..{n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("MalformedHeader: {0}")]
    MalformedHeader(String),
    #[error("MalformedLine: line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("EdgeCountMismatch: header declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Text formats understood by [`parse_graph`] and [`serialize_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    /// `n m` header, then `u v` lines, 0-indexed.
    EdgeList,
    /// `p edge n m` header, `e u v` lines, 1-indexed, `c` comments.
    Dimacs,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            other => Err(format!(
                "unknown graph format '{other}' (expected edge-list or dimacs)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    /// Common degree when the graph is regular, else 0. Lets neighbor
    /// lookups skip `offsets`, which matters on large random graphs.
    stride: usize,
}

impl Graph {
    /// Builds a canonical graph. Duplicate edges are reported, never merged.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        assert!(n <= Vertex::MAX as usize, "vertex count exceeds u32 range");
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w as u64,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push(if u < v { (u, v) } else { (v, u) });
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * canon.len()];
        // Edges are sorted by (u, v), so filling in this order leaves every
        // neighbor list ascending: for a vertex w, first come the smaller
        // endpoints u (as the second coordinate, in increasing u), then the
        // larger ones (as the first coordinate, in increasing v).
        for &(u, v) in &canon {
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for &(u, v) in &canon {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }

        let stride = match degree.first() {
            Some(&d) if d > 0 && degree.iter().all(|&x| x == d) => d,
            _ => 0,
        };
        Ok(Graph {
            n,
            edges: canon,
            offsets,
            neighbors,
            stride,
        })
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph::new(n, &[]).expect("edgeless graph is always valid")
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete graph is always valid")
    }

    /// Cycle `C_n`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n as Vertex)
            .map(|u| (u, (u + 1) % n as Vertex))
            .collect();
        Graph::new(n, &edges).expect("cycle is always valid")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n as Vertex).map(|u| (u - 1, u)).collect();
        Graph::new(n, &edges).expect("path is always valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        if self.stride != 0 {
            return &self.neighbors[v * self.stride..(v + 1) * self.stride];
        }
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (u as usize) < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n as Vertex
    }
}

/// Summary of structural checks on a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Always true for a constructed [`Graph`]; kept so reports are self-describing.
    pub is_simple: bool,
    /// Common degree when the graph is regular (and matches the expectation, if any).
    pub is_regular: Option<usize>,
    pub degree_histogram: BTreeMap<usize, usize>,
    /// Vertices whose degree differs from the expected degree.
    pub deviating: Vec<Vertex>,
}

pub fn validate_graph(g: &Graph, expected_degree: Option<usize>) -> ValidationReport {
    let mut degree_histogram = BTreeMap::new();
    for d in g.degrees() {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    let is_simple = g.edges.iter().all(|&(u, v)| u < v) && g.edges.windows(2).all(|w| w[0] < w[1]);

    let (is_regular, deviating) = match expected_degree {
        Some(d) => {
            let deviating: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) != d).collect();
            (deviating.is_empty().then_some(d), deviating)
        }
        None => {
            let common =
                (degree_histogram.len() == 1).then(|| *degree_histogram.keys().next().unwrap());
            (common, Vec::new())
        }
    };

    ValidationReport {
        is_simple,
        is_regular,
        degree_histogram,
        deviating,
    }
}

fn parse_field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::MalformedLine {
        line,
        reason: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::MalformedLine {
        line,
        reason: format!("invalid {what} '{tok}'"),
    })
}

fn header_field(tok: Option<&str>, header: &str) -> Result<usize, GraphError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::MalformedHeader(header.to_string()))
}

pub fn parse_graph<R: BufRead>(reader: R, format: GraphFormat) -> Result<Graph, GraphError> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(reader),
        GraphFormat::Dimacs => parse_dimacs(reader),
    }
}

fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        match header {
            None => {
                let n = header_field(toks.next(), trimmed)?;
                let m = header_field(toks.next(), trimmed)?;
                if toks.next().is_some() {
                    return Err(GraphError::MalformedHeader(trimmed.to_string()));
                }
                header = Some((n, m));
                edges.reserve(m);
            }
            Some((n, _)) => {
                let u: u64 = parse_field(toks.next(), lineno, "vertex")?;
                let v: u64 = parse_field(toks.next(), lineno, "vertex")?;
                if toks.next().is_some() {
                    return Err(GraphError::MalformedLine {
                        line: lineno,
                        reason: "trailing tokens".into(),
                    });
                }
                edges.push((to_vertex(u, n)?, to_vertex(v, n)?));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| GraphError::MalformedHeader("empty input".into()))?;
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::new(n, &edges)
}

fn to_vertex(x: u64, n: usize) -> Result<Vertex, GraphError> {
    if x >= n as u64 {
        return Err(GraphError::VertexOutOfRange { vertex: x, n });
    }
    Ok(x as Vertex)
}

fn parse_dimacs<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        let mut toks = trimmed.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::MalformedHeader(format!(
                        "second header at line {lineno}"
                    )));
                }
                if !matches!(toks.next(), Some("edge") | Some("col")) {
                    return Err(GraphError::MalformedHeader(trimmed.to_string()));
                }
                let n = header_field(toks.next(), trimmed)?;
                let m = header_field(toks.next(), trimmed)?;
                header = Some((n, m));
                edges.reserve(m);
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| {
                    GraphError::MalformedHeader(format!("edge before header at line {lineno}"))
                })?;
                let u: u64 = parse_field(toks.next(), lineno, "vertex")?;
                let v: u64 = parse_field(toks.next(), lineno, "vertex")?;
                if u == 0 || v == 0 {
                    return Err(GraphError::VertexOutOfRange { vertex: 0, n });
                }
                edges.push((to_vertex(u - 1, n)?, to_vertex(v - 1, n)?));
            }
            Some(other) if other.starts_with('c') => continue,
            Some(other) => {
                return Err(GraphError::MalformedLine {
                    line: lineno,
                    reason: format!("unknown line type '{other}'"),
                })
            }
        }
    }
    let (n, m) =
        header.ok_or_else(|| GraphError::MalformedHeader("missing 'p edge' line".into()))?;
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::new(n, &edges)
}

/// Serializes with edges in canonical order, so output is byte-deterministic.
pub fn serialize_graph(g: &Graph, format: GraphFormat) -> String {
    let mut out = String::with_capacity(16 + g.num_edges() * 14);
    match format {
        GraphFormat::EdgeList => {
            let _ = writeln!(out, "{} {}", g.n(), g.num_edges());
            for &(u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        GraphFormat::Dimacs => {
            let _ = writeln!(out, "p edge {} {}", g.n(), g.num_edges());
            for &(u, v) in g.edges() {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
        }
    }
    out
}
