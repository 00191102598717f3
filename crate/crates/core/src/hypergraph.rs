//! Explicit uniform hypergraphs and the edge-list file format.
//!
//! File layout: a header line `k n m`, then one edge per line as
//! space-separated 0-based vertex ids, sorted within the line, lines in
//! lexicographic order.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a `k`-graph on `n` vertices. Edges are sorted and deduplicated.
    pub fn new(k: usize, n: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("uniformity must be positive".into()));
        }
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if e.len() != k {
                return Err(Error::WrongSetSize {
                    expected: k,
                    got: e.len(),
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
                return Err(Error::VertexOutOfRange { id: v as usize, n });
            }
            out.push(e);
        }
        out.sort_unstable();
        out.dedup();
        Ok(Hypergraph { k, n, edges: out })
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Hypergraph {
            k,
            n,
            edges: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &[u32]) -> bool {
        let mut s = e.to_vec();
        s.sort_unstable();
        self.edges.binary_search(&s).is_ok()
    }

    /// True iff no edge lies inside `set`.
    pub fn is_independent(&self, set: &[u32]) -> bool {
        let mut member = vec![false; self.n];
        for &v in set {
            member[v as usize] = true;
        }
        !self
            .edges
            .iter()
            .any(|e| e.iter().all(|&v| member[v as usize]))
    }

    /// Sub-hypergraph induced on `vertices`, relabelled to `0..vertices.len()`
    /// in the given order.
    pub fn induced(&self, vertices: &[u32]) -> Hypergraph {
        let mut local = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| local[v as usize] != u32::MAX))
            .map(|e| e.iter().map(|&v| local[v as usize]).collect())
            .collect();
        Hypergraph::new(self.k, vertices.len(), edges).expect("induced edges are valid")
    }

    pub fn to_file_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.k, self.n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (header, edges) = parse_edge_list(text)?;
        let [k, n, m] = header;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Hypergraph::new(k, n, edges)
    }
}

/// Parses a `a b c` header followed by whitespace-separated id lines.
/// Blank lines and lines starting with `#` are skipped.
pub(crate) fn parse_edge_list(text: &str) -> Result<([usize; 3], Vec<Vec<u32>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: hline,
            msg: e.to_string(),
        })?;
    if nums.len() != 3 {
        return Err(Error::Parse {
            line: hline,
            msg: "header must have three integers".into(),
        });
    }
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let e: Vec<u32> = l
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
        edges.push(e);
    }
    Ok(([nums[0], nums[1], nums[2]], edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn file_format_is_sorted() {
        let h = Hypergraph::new(3, 6, vec![vec![5, 4, 3], vec![2, 1, 0], vec![0, 1, 2]]).unwrap();
        assert_eq!(h.to_file_string(), "3 6 2\n0 1 2\n3 4 5\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1, 1]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![0, 1, 4]]).is_err());
        assert!(Hypergraph::parse("3 4 2\n0 1 2\n").is_err());
        assert!(Hypergraph::parse("3 4\n").is_err());
        assert!(Hypergraph::parse("3 4 1\n0 x 2\n").is_err());
    }

    #[test]
    fn induced_relabels() {
        let h = Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let sub = h.induced(&[4, 3, 2]);
        assert_eq!(sub.edges(), &[vec![0, 1, 2]]);
        assert!(h.is_independent(&[0, 1, 3, 4]));
        assert!(!h.is_independent(&[2, 3, 4]));
    }

    proptest! {
        #[test]
        fn file_round_trip(n in 3usize..12, raw in proptest::collection::vec((0u32..12, 0u32..12, 0u32..12), 0..20)) {
            let edges: Vec<Vec<u32>> = raw.into_iter()
                .map(|(a, b, c)| vec![a % n as u32, b % n as u32, c % n as u32])
                .filter(|e| e[0] != e[1] && e[1] != e[2] && e[0] != e[2])
                .collect();
            let h = Hypergraph::new(3, n, edges).unwrap();
            prop_assert_eq!(Hypergraph::parse(&h.to_file_string()).unwrap(), h);
        }
    }
}
