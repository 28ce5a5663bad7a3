//! Independent sets and their text serialization.

use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("VertexOutOfRange: vertex {vertex} not in 0..{n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("malformed independent set: {0}")]
    Malformed(String),
}

/// A vertex subset, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndependentSet {
    members: Vec<Vertex>,
}

impl IndependentSet {
    pub fn from_members(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        IndependentSet { members }
    }

    pub(crate) fn from_flags(flags: &[bool]) -> Self {
        let members = flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(v, _)| v as Vertex)
            .collect();
        IndependentSet { members }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    /// α, the number of members.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// `alpha k` followed by one member per line, ascending.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(12 + 8 * self.members.len());
        let _ = writeln!(out, "alpha {}", self.size());
        for v in &self.members {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self, SetError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| SetError::Malformed("empty input".into()))?
            .map_err(|e| SetError::Malformed(e.to_string()))?;
        let k: usize = header
            .strip_prefix("alpha ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| SetError::Malformed(format!("bad header '{header}'")))?;
        let mut members = Vec::with_capacity(k);
        for line in lines {
            let line = line.map_err(|e| SetError::Malformed(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            members.push(
                line.trim()
                    .parse()
                    .map_err(|_| SetError::Malformed(format!("bad vertex '{line}'")))?,
            );
        }
        if members.len() != k {
            return Err(SetError::Malformed(format!(
                "header says {k} members, found {}",
                members.len()
            )));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SetError::Malformed(
                "members must be strictly ascending".into(),
            ));
        }
        Ok(IndependentSet { members })
    }
}

/// True iff no edge of `g` has both endpoints in `s`. Linear in `|E|`.
pub fn validate_is(g: &Graph, s: &IndependentSet) -> Result<bool, SetError> {
    let mut inside = vec![false; g.n()];
    for &v in s.members() {
        if v as usize >= g.n() {
            return Err(SetError::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
        inside[v as usize] = true;
    }
    Ok(!g
        .edges()
        .iter()
        .any(|&(u, v)| inside[u as usize] && inside[v as usize]))
}

/// True iff every vertex outside `s` has a neighbor in `s`.
pub fn is_maximal(g: &Graph, s: &IndependentSet) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in s.members() {
        inside[v as usize] = true;
    }
    g.vertices()
        .filter(|&v| !inside[v as usize])
        .all(|v| g.neighbors(v).iter().any(|&w| inside[w as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_on_triangle() {
        let t = Graph::complete(3);
        assert_eq!(
            validate_is(&t, &IndependentSet::from_members(vec![0])),
            Ok(true)
        );
        assert_eq!(
            validate_is(&t, &IndependentSet::from_members(vec![0, 1])),
            Ok(false)
        );
        assert_eq!(validate_is(&t, &IndependentSet::default()), Ok(true));
        assert_eq!(
            validate_is(&t, &IndependentSet::from_members(vec![3])),
            Err(SetError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn maximality() {
        let p = Graph::path(4);
        assert!(is_maximal(&p, &IndependentSet::from_members(vec![0, 2])));
        assert!(!is_maximal(&p, &IndependentSet::from_members(vec![0])));
    }

    #[test]
    fn text_format() {
        let s = IndependentSet::from_members(vec![5, 1, 3]);
        assert_eq!(s.serialize(), "alpha 3\n1\n3\n5\n");
        assert_eq!(IndependentSet::parse(s.serialize().as_bytes()), Ok(s));
        assert_eq!(IndependentSet::default().serialize(), "alpha 0\n");
        assert!(IndependentSet::parse("alpha 2\n1\n".as_bytes()).is_err());
    }
}
