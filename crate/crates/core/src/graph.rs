//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! A [`Graph`] is an immutable value: every operation that changes the
//! vertex or edge set returns a new graph. Vertex deletion re-indexes the
//! survivors and hands back the old/new index maps so that results computed
//! on a subgraph can be reported in the labels of the original graph.
//!
//! The edge-list text format is
//!
//! ```text
//! # comment lines are allowed anywhere
//! n m
//! u v      (m lines, 0 <= u < v < n)
//! ```
//!
//! Loops, repeated edges and out-of-range indices are parse errors; the
//! parser never repairs its input.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseIssue, Result};

/// A set of vertex indices, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Bitmask form; only meaningful when every member is below 64.
    pub fn to_mask(&self) -> u64 {
        self.iter().fold(0u64, |m, v| m | (1u64 << v))
    }

    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|&v| mask >> v & 1 == 1).collect()
    }

    pub fn range(range: std::ops::Range<usize>) -> Self {
        range.collect()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Maps every member through `map`, e.g. to translate subgraph labels
    /// back to the labels of the graph the subgraph was cut from.
    pub fn relabel(&self, map: &[usize]) -> VertexSet {
        self.iter().map(|v| map[v]).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(arr: [usize; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple undirected graph stored as one neighbor set per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
}

/// Result of [`Graph::delete_vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deletion {
    pub graph: Graph,
    /// `old_to_new[v]` is `None` for deleted vertices.
    pub old_to_new: Vec<Option<usize>>,
    /// `new_to_old[w]` is the original label of subgraph vertex `w`.
    pub new_to_old: Vec<usize>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![BTreeSet::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicate edges
    /// (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge {u}-{v} has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            if !g.adjacency[u].insert(v) {
                return Err(Error::InvalidInput(format!("duplicate edge {u}-{v}")));
            }
            g.adjacency[v].insert(u);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star `K_{1,leaves}` with the center at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are valid")
    }

    /// Graph on `n` vertices whose edges are the set bits of `mask` over the
    /// pairs `(u, v)`, `u < v`, in lexicographic order. Used to enumerate all
    /// labeled graphs of a given order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let edges = pairs(n)
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e);
        Graph::from_edges(n, edges).expect("pair mask yields a simple graph")
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "vertex {v} out of range for a graph of order {}",
                self.order()
            )))
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        s.iter().try_for_each(|v| self.check_vertex(v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|n| n.contains(&v))
    }

    /// Neighbors of `v`; panics on an invalid index.
    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(BTreeSet::len).collect()
    }

    /// Minimum degree; undefined (an error) on the graph with no vertices.
    pub fn min_degree(&self) -> Result<usize> {
        self.adjacency
            .iter()
            .map(BTreeSet::len)
            .min()
            .ok_or_else(|| Error::InvalidInput("minimum degree of the empty graph is undefined".into()))
    }

    pub fn neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].iter().copied().collect())
    }

    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        let mut s = self.neighborhood(v)?;
        s.insert(v);
        Ok(s)
    }

    /// Union of the open neighborhoods of every member of `s`.
    pub fn neighborhood_of_set(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(s.iter()
            .flat_map(|v| self.adjacency[v].iter().copied())
            .collect())
    }

    /// `N(u) ∪ N(v)` for two distinct vertices.
    pub fn neighborhood_union(&self, u: usize, v: usize) -> Result<VertexSet> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidInput(format!(
                "neighborhood union needs two distinct vertices, got {u} twice"
            )));
        }
        Ok(self.adjacency[u]
            .union(&self.adjacency[v])
            .copied()
            .collect())
    }

    /// Size of `N(u) ∪ N(v)` without materializing the set.
    pub(crate) fn neighborhood_union_len(&self, u: usize, v: usize) -> usize {
        self.adjacency[u].union(&self.adjacency[v]).count()
    }

    pub fn is_independent(&self, s: &VertexSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(s.iter()
            .all(|v| self.adjacency[v].iter().all(|w| !s.contains(*w))))
    }

    /// Induced subgraph on `V \ s`, re-indexed in increasing label order.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<Deletion> {
        self.check_set(s)?;
        let new_to_old: Vec<usize> = (0..self.order()).filter(|v| !s.contains(*v)).collect();
        let mut old_to_new = vec![None; self.order()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let adjacency = new_to_old
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter_map(|&w| old_to_new[w])
                    .collect()
            })
            .collect();
        Ok(Deletion {
            graph: Graph { adjacency },
            old_to_new,
            new_to_old,
        })
    }

    /// Disjoint union: `other`'s vertices are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(
            other
                .adjacency
                .iter()
                .map(|ns| ns.iter().map(|&w| w + shift).collect()),
        );
        Graph { adjacency }
    }

    /// Join: disjoint union plus every edge between the two operands.
    pub fn join(&self, other: &Graph) -> Graph {
        let (n1, n2) = (self.order(), other.order());
        let mut g = self.disjoint_union(other);
        for u in 0..n1 {
            g.adjacency[u].extend(n1..n1 + n2);
        }
        for v in n1..n1 + n2 {
            g.adjacency[v].extend(0..n1);
        }
        g
    }

    /// `e(S, T)`: number of edges with one end in `s` and the other in `t`.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> Result<usize> {
        self.check_set(s)?;
        self.check_set(t)?;
        if !s.is_disjoint(t) {
            return Err(Error::InvalidInput(format!("sets {s} and {t} overlap")));
        }
        Ok(s.iter()
            .map(|v| self.adjacency[v].iter().filter(|w| t.contains(**w)).count())
            .sum())
    }

    /// Adjacency rows as bitmasks, available for graphs of order at most 64.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.order() > 64 {
            return None;
        }
        Some(
            self.adjacency
                .iter()
                .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1u64 << w)))
                .collect(),
        )
    }

    /// Parses the edge-list format described in the module docs. All
    /// problems found are reported together, each with its line number.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut issues = Vec::new();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let Some((header_line, header)) = lines.next() else {
            return Err(Error::parse_at(0, "missing header line `n m`"));
        };
        let (n, m) = match parse_pair(header) {
            Some(nm) => nm,
            None => return Err(Error::parse_at(header_line, "header must be two integers `n m`")),
        };

        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (line, body) in lines {
            seen += 1;
            let Some((u, v)) = parse_pair(body) else {
                issues.push(ParseIssue {
                    line,
                    message: format!("expected two vertex indices, found `{body}`"),
                });
                continue;
            };
            let message = if u >= n || v >= n {
                Some(format!("edge {u} {v} out of range for n = {n}"))
            } else if u == v {
                Some(format!("loop at vertex {u}"))
            } else if u > v {
                Some(format!("edge {u} {v} must be written with u < v"))
            } else if g.adjacency[u].contains(&v) {
                Some(format!("duplicate edge {u} {v}"))
            } else {
                g.adjacency[u].insert(v);
                g.adjacency[v].insert(u);
                None
            };
            if let Some(message) = message {
                issues.push(ParseIssue { line, message });
            }
        }
        if seen != m {
            issues.push(ParseIssue {
                line: header_line,
                message: format!("header declares {m} edges but {seen} edge lines follow"),
            });
        }
        issues.sort_by_key(|i| i.line);
        if issues.is_empty() {
            Ok(g)
        } else {
            Err(Error::Parse(issues))
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.order(), self.size());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Unordered vertex pairs `(u, v)`, `u < v`, in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_1_1_2() -> Graph {
        Graph::empty(1).join(&Graph::empty(1)).join(&Graph::empty(2))
    }

    #[test]
    fn degrees() {
        assert_eq!(Graph::complete(3).degree(0).unwrap(), 2);
        assert_eq!(Graph::empty(5).degree(3).unwrap(), 0);
        assert_eq!(Graph::path(3).degree(1).unwrap(), 2);
        assert!(Graph::path(3).degree(3).is_err());
    }

    #[test]
    fn min_degree() {
        assert_eq!(Graph::complete(4).min_degree().unwrap(), 3);
        assert_eq!(Graph::path(3).min_degree().unwrap(), 1);
        // brute-force scan of K1 v K1 v 2K1: degrees 3,3,2,2
        let g = k_1_1_2();
        let scanned = (0..g.order()).map(|v| g.neighbors(v).len()).min().unwrap();
        assert_eq!(scanned, 2);
        assert_eq!(g.min_degree().unwrap(), 2);
        assert!(Graph::empty(0).min_degree().is_err());
    }

    #[test]
    fn neighborhood_unions() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.neighborhood_union(0, 1).unwrap(), VertexSet::from([0, 1, 2, 3]));
        assert!(Graph::empty(4).neighborhood_union(1, 2).unwrap().is_empty());
        let g = k_1_1_2();
        assert_eq!(g.neighborhood_union(2, 3).unwrap(), VertexSet::from([0, 1]));
        assert!(k4.neighborhood_union(2, 2).is_err());
    }

    #[test]
    fn closed_and_set_neighborhoods() {
        let p = Graph::path(4);
        assert_eq!(p.closed_neighborhood(1).unwrap(), VertexSet::from([0, 1, 2]));
        assert_eq!(p.neighborhood_of_set(&VertexSet::from([0, 3])).unwrap(), VertexSet::from([1, 2]));
    }

    #[test]
    fn deletion() {
        let d = Graph::complete(4).delete_vertices(&VertexSet::from([2])).unwrap();
        assert_eq!(d.graph, Graph::complete(3));
        assert_eq!(d.new_to_old, vec![0, 1, 3]);
        assert_eq!(d.old_to_new, vec![Some(0), Some(1), None, Some(2)]);

        let c = Graph::cycle(5).unwrap();
        assert_eq!(c.delete_vertices(&VertexSet::new()).unwrap().graph, c);

        let d = Graph::path(3).delete_vertices(&VertexSet::from([1])).unwrap();
        assert_eq!(d.graph, Graph::empty(2));
        assert!(Graph::path(3).delete_vertices(&VertexSet::from([7])).is_err());
    }

    #[test]
    fn joins_and_unions() {
        assert_eq!(Graph::empty(1).join(&Graph::empty(1)), Graph::complete(2));
        let k22 = Graph::empty(2).join(&Graph::empty(2));
        assert_eq!(k22, Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap());
        assert_eq!(k22.degrees(), vec![2; 4]);
        assert_eq!(k_1_1_2().order(), 4);

        assert_eq!(Graph::empty(1).disjoint_union(&Graph::empty(1)), Graph::empty(2));
        let m = Graph::complete(2).disjoint_union(&Graph::complete(2));
        assert_eq!(m, Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap());
        let t3 = (0..3).fold(Graph::empty(0), |acc, _| acc.disjoint_union(&Graph::complete(2)));
        assert_eq!(t3.order(), 6);
        assert_eq!(t3.size(), 3);
        assert_eq!(t3.degrees(), vec![1; 6]);
    }

    #[test]
    fn edge_counts_between_sets() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edges_between(&VertexSet::from([0, 1]), &VertexSet::from([2, 3])).unwrap(), 4);
        let e = Graph::empty(4);
        assert_eq!(e.edges_between(&VertexSet::from([0]), &VertexSet::from([1, 2])).unwrap(), 0);
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(c4.edges_between(&VertexSet::from([0]), &VertexSet::from([2])).unwrap(), 0);
        assert!(k4.edges_between(&VertexSet::from([0, 1]), &VertexSet::from([1])).is_err());
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "# path\n3 2\n0 1\n\n1 2\n";
        let g = Graph::parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn parse_reports_every_bad_line() {
        let text = "4 5\n0 1\n1 1\n0 1\n2 9\nx y\n";
        let Err(Error::Parse(issues)) = Graph::parse_edge_list(text) else {
            panic!("expected parse failure");
        };
        let lines: Vec<_> = issues.iter().map(|i| i.line).collect();
        assert_eq!(lines, vec![3, 4, 5, 6]);
        assert!(issues[0].message.contains("loop"));
        assert!(issues[1].message.contains("duplicate"));
        assert!(issues[2].message.contains("out of range"));
    }

    #[test]
    fn parse_rejects_count_mismatch_and_orientation() {
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n2 1\n").is_err());
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("# only a comment\n").is_err());
        assert_eq!(Graph::parse_edge_list("0 0\n").unwrap().order(), 0);
    }

    #[test]
    fn pair_mask_enumeration() {
        assert_eq!(Graph::from_pair_mask(4, 0), Graph::empty(4));
        assert_eq!(Graph::from_pair_mask(4, (1 << 6) - 1), Graph::complete(4));
        assert_eq!(Graph::from_pair_mask(3, 0b101), Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
    }
}
