//! Simple base graphs and the statistics the Whitney formulas consume.
//!
//! Vertices are stored as 0-based indices. Every text and JSON surface uses
//! 1-based labels, so vertex `v1` of a graph is index `0` here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported vertex count; vertex sets are `u32` bitmasks.
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph spec `{0}`")]
    Malformed(String),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
}

/// A subset of the vertices of a graph, as a bitmask over 0-based indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u32) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(VertexSet::EMPTY, |s, v| s.with(v))
    }

    /// Builds a set from 1-based labels, checking them against `n`.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I, n: usize) -> Result<Self, GraphError> {
        let mut set = VertexSet::EMPTY;
        for label in labels {
            if label == 0 || label > n {
                return Err(GraphError::VertexOutOfRange { vertex: label, n });
            }
            set = set.with(label - 1);
        }
        Ok(set)
    }

    /// Parses `all`, `none`, or a comma-separated list of 1-based labels.
    pub fn parse(text: &str, n: usize) -> Result<Self, GraphError> {
        let t = text.trim();
        match t {
            "all" | "V" => return Ok(VertexSet::full(n)),
            "none" | "" | "{}" => return Ok(VertexSet::EMPTY),
            _ => {}
        }
        let inner = t.trim_start_matches('{').trim_end_matches('}');
        let labels = inner
            .split(',')
            .map(|p| p.trim().trim_start_matches('v'))
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|_| GraphError::Malformed(text.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        VertexSet::from_labels(labels, n)
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | (1 << v))
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within `0..n`.
    pub fn complement(self, n: usize) -> Self {
        VertexSet::full(n).difference(self)
    }

    /// Members in ascending order (0-based).
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Members as 1-based labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    /// Size first, then lexicographic on the sorted members.
    pub fn cmp_size_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// A loopless graph without parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct SimpleGraph {
    n: usize,
    /// Sorted, each pair with `u < v`.
    edges: Vec<(usize, usize)>,
    adj: Vec<VertexSet>,
}

/// JSON form `{"n": 3, "edges": [[1,2],[2,3]]}` with 1-based labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for SimpleGraph {
    type Error = GraphError;

    fn try_from(json: GraphJson) -> Result<Self, Self::Error> {
        SimpleGraph::from_labeled_edges(json.n, json.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<SimpleGraph> for GraphJson {
    fn from(g: SimpleGraph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
        }
    }
}

/// Result of deleting vertices: the compacted graph and, for each new
/// index, the index it had in the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub graph: SimpleGraph,
    pub original: Vec<usize>,
}

impl Deletion {
    /// True when every vertex was deleted.
    pub fn is_empty(&self) -> bool {
        self.graph.n == 0
    }
}

/// The quantities appearing in the closed form for the low Whitney numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub edge_count: usize,
    pub triangles: usize,
    pub degrees: Vec<usize>,
    /// Edges of the complement graph with both ends outside X.
    pub complement_edges_outside: usize,
    pub x_size: usize,
    /// Sum of degrees over vertices outside X.
    pub degree_sum_outside: usize,
}

impl SimpleGraph {
    /// Builds a graph from 0-based edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adj = vec![VertexSet::EMPTY; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a + 1));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u + 1, v + 1));
            }
            adj[u] = adj[u].with(v);
            adj[v] = adj[v].with(u);
            list.push((u, v));
        }
        list.sort_unstable();
        Ok(SimpleGraph { n, edges: list, adj })
    }

    /// Builds a graph from 1-based edges.
    pub fn from_labeled_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut zero_based = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            zero_based.push((a - 1, b - 1));
        }
        SimpleGraph::from_edges(n, zero_based)
    }

    pub fn edgeless(n: usize) -> Self {
        SimpleGraph::from_edges(n, []).expect("edgeless graph")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        SimpleGraph::from_edges(n, edges).expect("complete graph")
    }

    /// The path with `k` edges on `k + 1` vertices.
    pub fn path(k: usize) -> Self {
        SimpleGraph::from_edges(k + 1, (0..k).map(|u| (u, u + 1))).expect("path graph")
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Malformed(format!("C{n}")));
        }
        SimpleGraph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    /// Every labeled simple graph on `n` vertices, in order of the bitmask
    /// over the lexicographically ordered vertex pairs.
    pub fn all_labeled(n: usize) -> impl Iterator<Item = SimpleGraph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let total = 1u64 << pairs.len();
        (0..total).map(move |mask| {
            let chosen = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            SimpleGraph::from_edges(n, chosen).expect("labeled graph")
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as sorted 0-based pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Connected components, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut blocks = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut block = VertexSet::singleton(start);
            let mut frontier = block;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v]);
                }
                frontier = next.difference(block);
                block = block.union(next);
            }
            seen = seen.union(block);
            blocks.push(block);
        }
        blocks
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        VertexSet::from_indices((0..self.n).filter(|&v| self.adj[v].is_empty()))
    }

    /// Number of isolated vertices not in `x`.
    pub fn zeta(&self, x: VertexSet) -> usize {
        self.isolated_vertices().difference(x).len()
    }

    pub fn is_stable(&self, y: VertexSet) -> bool {
        y.iter().all(|v| self.adj[v].intersection(y).is_empty())
    }

    /// Stable subsets of `within` of size at most `max_size`, including the
    /// empty set, ordered by size and then lexicographically.
    pub fn stable_sets(&self, within: VertexSet, max_size: usize) -> Vec<VertexSet> {
        fn extend(
            g: &SimpleGraph,
            current: VertexSet,
            candidates: VertexSet,
            room: usize,
            out: &mut Vec<VertexSet>,
        ) {
            out.push(current);
            if room == 0 {
                return;
            }
            for v in candidates.iter() {
                // Only vertices above `v` remain candidates, so each set is produced once.
                let above = VertexSet::from_bits((candidates.bits() as u64 & !((2u64 << v) - 1)) as u32);
                extend(g, current.with(v), above.difference(g.adj[v]), room - 1, out);
            }
        }
        let mut out = Vec::new();
        extend(self, VertexSet::EMPTY, within.intersection(self.vertices()), max_size, &mut out);
        out.sort_by(VertexSet::cmp_size_lex);
        out
    }

    /// Number of stable sets of size `k`.
    pub fn alpha(&self, k: usize) -> usize {
        self.stable_sets(self.vertices(), k)
            .iter()
            .filter(|y| y.len() == k)
            .count()
    }

    /// Induced subgraph on the complement of `y`, relabeled compactly.
    pub fn delete_vertices(&self, y: VertexSet) -> Deletion {
        let original: Vec<usize> = (0..self.n).filter(|&v| !y.contains(v)).collect();
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in original.iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| !y.contains(u) && !y.contains(v))
            .map(|&(u, v)| (index[u], index[v]));
        let graph = SimpleGraph::from_edges(original.len(), edges).expect("induced subgraph");
        Deletion { graph, original }
    }

    pub fn complement(&self) -> SimpleGraph {
        let edges = (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.adjacent(u, v));
        SimpleGraph::from_edges(self.n, edges).expect("complement graph")
    }

    /// Vertex-disjoint union; the vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> Result<SimpleGraph, GraphError> {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        SimpleGraph::from_edges(self.n + other.n, edges)
    }

    pub fn triangles(&self) -> usize {
        self.edges
            .iter()
            .map(|&(u, v)| {
                // count each triangle once, at its two lowest vertices
                let common = self.adj[u].intersection(self.adj[v]);
                common.iter().filter(|&w| w > v).count()
            })
            .sum()
    }

    pub fn stats(&self, x: VertexSet) -> GraphStats {
        let outside = x.complement(self.n);
        let complement_edges_outside = self.complement().delete_vertices(x).graph.edge_count();
        GraphStats {
            n: self.n,
            edge_count: self.edges.len(),
            triangles: self.triangles(),
            degrees: (0..self.n).map(|v| self.degree(v)).collect(),
            complement_edges_outside,
            x_size: x.intersection(self.vertices()).len(),
            degree_sum_outside: outside.iter().map(|v| self.degree(v)).sum(),
        }
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(u, v)| format!("{}-{}", u + 1, v + 1))
            .collect();
        write!(f, "n={}; {}", self.n, edges.join(","))
    }
}

impl FromStr for SimpleGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

/// Parses a generator name (`K<n>`, `P<k>`, `C<n>`, `E<n>`), an explicit
/// `n=<n>; u-v,...` list, or the JSON form.
pub fn parse_graph(spec: &str) -> Result<SimpleGraph, GraphError> {
    let text = spec.trim();
    let malformed = || GraphError::Malformed(spec.to_string());
    if text.starts_with('{') {
        let json: GraphJson = serde_json::from_str(text).map_err(|_| malformed())?;
        return SimpleGraph::try_from(json);
    }
    if let Some(rest) = text.strip_prefix("n=") {
        let (count, list) = match rest.split_once(';') {
            Some((c, l)) => (c, l),
            None => (rest, ""),
        };
        let n: usize = count.trim().parse().map_err(|_| malformed())?;
        if n == 0 {
            return Err(malformed());
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut edges = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item.split_once('-').ok_or_else(malformed)?;
            let a: usize = a.trim().parse().map_err(|_| malformed())?;
            let b: usize = b.trim().parse().map_err(|_| malformed())?;
            edges.push((a, b));
        }
        return SimpleGraph::from_labeled_edges(n, edges);
    }
    let mut chars = text.chars();
    let kind = chars.next().ok_or_else(malformed)?;
    let size: usize = chars.as_str().parse().map_err(|_| malformed())?;
    let vertices = if kind == 'P' { size + 1 } else { size };
    if vertices > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(vertices));
    }
    match kind {
        'K' if size >= 1 => Ok(SimpleGraph::complete(size)),
        'E' if size >= 1 => Ok(SimpleGraph::edgeless(size)),
        'P' => Ok(SimpleGraph::path(size)),
        'C' => SimpleGraph::cycle(size),
        _ => Err(malformed()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> SimpleGraph {
        parse_graph(s).unwrap()
    }

    #[test]
    fn parses_generators_and_lists() {
        let p2 = g("P2");
        assert_eq!(p2.n(), 3);
        assert_eq!(p2.edges(), &[(0, 1), (1, 2)]);
        let e1 = g("E1");
        assert_eq!((e1.n(), e1.edge_count()), (1, 0));
        assert_eq!(g("n=3; 1-2,2-3,1-3"), SimpleGraph::complete(3));
        assert_eq!(g("n=4"), SimpleGraph::edgeless(4));
        assert_eq!(g("C4").edge_count(), 4);
        assert_eq!(g(r#"{"n": 3, "edges": [[1,2],[2,3]]}"#), p2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("Q3"), Err(GraphError::Malformed(_))));
        assert!(matches!(parse_graph("n=3; 1-1"), Err(GraphError::Loop(1))));
        assert!(matches!(parse_graph("n=3; 1-2,2-1"), Err(GraphError::DuplicateEdge(1, 2))));
        assert!(matches!(
            parse_graph("n=3; 1-4"),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        assert!(parse_graph("n=3; 1:2").is_err());
        assert!(parse_graph("C2").is_err());
        assert!(parse_graph("K0").is_err());
        assert!(matches!(parse_graph("E40"), Err(GraphError::TooManyVertices(40))));
    }

    #[test]
    fn display_round_trips() {
        for spec in ["P2", "K4", "C5", "E3", "n=5; 1-3,2-5"] {
            let graph = g(spec);
            assert_eq!(g(&graph.to_string()), graph);
        }
    }

    #[test]
    fn component_counts() {
        assert_eq!(g("K3").component_count(), 1);
        assert_eq!(g("E3").component_count(), 3);
        let two = g("n=4; 1-2,3-4");
        assert_eq!(two.components(), vec![VertexSet::from_indices([0, 1]), VertexSet::from_indices([2, 3])]);
    }

    #[test]
    fn zeta_counts_isolated_outside_x() {
        assert_eq!(g("P2").zeta(VertexSet::EMPTY), 0);
        assert_eq!(g("E2").zeta(VertexSet::from_indices([0])), 1);
        assert_eq!(g("E3").zeta(VertexSet::EMPTY), 3);
    }

    #[test]
    fn stable_sets_of_p2_and_k3() {
        let p2 = g("P2");
        let sets: Vec<Vec<usize>> = p2.stable_sets(p2.vertices(), 3).iter().map(|s| s.labels()).collect();
        assert_eq!(sets, vec![vec![], vec![1], vec![2], vec![3], vec![1, 3]]);
        let k3 = g("K3");
        assert_eq!(k3.stable_sets(k3.vertices(), 3).len(), 4);
        assert_eq!(k3.stable_sets(VertexSet::EMPTY, 2), vec![VertexSet::EMPTY]);
        // size cap respected
        assert_eq!(p2.stable_sets(p2.vertices(), 1).len(), 4);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(g("P2").alpha(2), 1);
        assert_eq!(g("P2").alpha(1), 3);
        assert_eq!(g("K4").alpha(2), 0);
        assert_eq!(g("K4").alpha(0), 1);
    }

    #[test]
    fn vertex_deletion() {
        let p2 = g("P2");
        assert_eq!(p2.delete_vertices(VertexSet::from_indices([1])).graph, SimpleGraph::edgeless(2));
        let d = p2.delete_vertices(VertexSet::from_indices([0]));
        assert_eq!(d.graph, SimpleGraph::complete(2));
        assert_eq!(d.original, vec![1, 2]);
        assert_eq!(g("K3").delete_vertices(VertexSet::EMPTY).graph, g("K3"));
        assert!(p2.delete_vertices(p2.vertices()).is_empty());
    }

    #[test]
    fn stats_values() {
        let k3 = g("K3").stats(VertexSet::full(3));
        assert_eq!((k3.edge_count, k3.triangles), (3, 1));
        let p2 = g("P2").stats(VertexSet::EMPTY);
        assert_eq!((p2.edge_count, p2.triangles, p2.complement_edges_outside), (2, 0, 1));
        assert_eq!(p2.degrees, vec![1, 2, 1]);
        assert_eq!(p2.degree_sum_outside, 4);
        assert_eq!(g("K4").triangles(), 4);
    }

    #[test]
    fn vertex_set_parsing() {
        assert_eq!(VertexSet::parse("all", 3).unwrap(), VertexSet::full(3));
        assert_eq!(VertexSet::parse("none", 3).unwrap(), VertexSet::EMPTY);
        assert_eq!(VertexSet::parse("1,3", 3).unwrap(), VertexSet::from_indices([0, 2]));
        assert_eq!(VertexSet::parse("{v1,v2}", 3).unwrap(), VertexSet::from_indices([0, 1]));
        assert!(VertexSet::parse("4", 3).is_err());
        assert_eq!(VertexSet::from_indices([0, 2]).to_string(), "{1,3}");
    }

    #[test]
    fn labeled_graph_counts() {
        assert_eq!(SimpleGraph::all_labeled(4).count(), 64);
        assert_eq!(SimpleGraph::all_labeled(1).count(), 1);
    }
}
