//! Finite groups, group expansions of simple graphs, and balance.
//!
//! A [`GainGraph`] stores each link with a fixed orientation `tail → head`
//! and the gain read in that direction; reading it the other way yields the
//! inverse gain. A set of edges is balanced on a component when the
//! component has no half edge and there is a potential `θ` on its vertices
//! with `θ(head) = θ(tail)·gain` for every link, which is exactly the
//! condition that every circle has neutral gain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{SimpleGraph, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("malformed group spec `{0}`")]
    Malformed(String),
    #[error("multiplication table is not {0}x{0}")]
    BadShape(usize),
    #[error("product {0}*{1} is not an element")]
    NotClosed(usize, usize),
    #[error("element 0 is not an identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("({0}*{1})*{2} differs from {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
}

/// A finite group given by its multiplication table; element 0 is the
/// identity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = GroupError;

    fn try_from(raw: GroupJson) -> Result<Self, GroupError> {
        if raw.table.len() != raw.order {
            return Err(GroupError::BadShape(raw.order));
        }
        FiniteGroup::from_table(raw.table)
    }
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        GroupJson { order: g.order, table: g.table_rows() }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish()
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(order * order);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::BadShape(order));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= order {
                    return Err(GroupError::NotClosed(a, b));
                }
                table.push(c as u32);
            }
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        if (0..order).any(|a| at(0, a) != a || at(a, 0) != a) {
            return Err(GroupError::NoIdentity);
        }
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order).find(|&b| at(a, b) == 0 && at(b, a) == 0);
            inverse.push(inv.ok_or(GroupError::NoInverse(a))? as u32);
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, inverse })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inverse: vec![0] }
    }

    /// ℤ_m under addition.
    pub fn cyclic(m: usize) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::Empty);
        }
        let table = (0..m).flat_map(|a| (0..m).map(move |b| ((a + b) % m) as u32)).collect();
        let inverse = (0..m).map(|a| ((m - a) % m) as u32).collect();
        Ok(FiniteGroup { order: m, table, inverse })
    }

    /// Componentwise product; element `(i, j)` has index `i·|b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let order = a.order * b.order;
        let split = |x: usize| (x / b.order, x % b.order);
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let ((xa, xb), (ya, yb)) = (split(x), split(y));
                table.push((a.mul(xa, ya) * b.order + b.mul(xb, yb)) as u32);
            }
        }
        let inverse = (0..order)
            .map(|x| {
                let (xa, xb) = split(x);
                (a.inv(xa) * b.order + b.inv(xb)) as u32
            })
            .collect();
        FiniteGroup { order, table, inverse }
    }

    /// The symmetric group on `k` points, elements in lexicographic order of
    /// their one-line notation, composed as functions (`(a·b)(x) = a(b(x))`).
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if k == 0 || k > 5 {
            return Err(GroupError::Malformed(format!("S{k}")));
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        let mut current: Vec<usize> = (0..k).collect();
        while next_permutation(&mut current) {
            perms.push(current.clone());
        }
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
        let rows = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&b.iter().map(|&x| a[x]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Smallest `k >= 1` with `a^k` the identity.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|row| row.iter().map(|&c| c as usize).collect())
            .collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl FromStr for FiniteGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        parse_group(s)
    }
}

/// Parses `Z<m>`, products such as `Z2xZ2`, `S<k>`, or the JSON table form
/// `{"order": m, "table": [[...]]}`.
pub fn parse_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let text = spec.trim();
    let malformed = || GroupError::Malformed(spec.to_string());
    if text.starts_with('{') {
        let raw: GroupJson = serde_json::from_str(text).map_err(|_| malformed())?;
        return FiniteGroup::try_from(raw);
    }
    let mut factors = text.split(['x', '×']).map(|factor| {
        let factor = factor.trim();
        let (kind, size) = factor.split_at(factor.chars().next().map_or(0, char::len_utf8));
        let size: usize = size.parse().map_err(|_| malformed())?;
        match kind {
            "Z" => FiniteGroup::cyclic(size),
            "S" => FiniteGroup::symmetric(size),
            _ => Err(malformed()),
        }
    });
    let first = factors.next().ok_or_else(malformed)??;
    factors.try_fold(first, |acc, next| Ok(FiniteGroup::direct_product(&acc, &next?)))
}

/// One edge of a gain graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GainEdge {
    /// A link read from `tail` to `head` with gain `gain`.
    Link { tail: usize, head: usize, gain: usize },
    /// A half edge at `vertex`.
    Half { vertex: usize },
}

/// Bitmask over the edge sequence of a [`GainGraph`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(u64);

/// Largest number of edges an [`EdgeSubset`] can address.
pub const MAX_SUBSET_EDGES: usize = 64;

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        EdgeSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The first `m` edges.
    pub fn all(m: usize) -> Self {
        assert!(m <= MAX_SUBSET_EDGES, "edge subsets address at most 64 edges");
        if m == 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << m) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(EdgeSubset::EMPTY, |s, e| s.with(e))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Self {
        EdgeSubset(self.0 | 1 << e)
    }

    pub fn without(self, e: usize) -> Self {
        EdgeSubset(self.0 & !(1 << e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        EdgeSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        EdgeSubset(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

/// The partially filled group expansion of a simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GainGraph {
    base: SimpleGraph,
    half_edges: VertexSet,
    group: FiniteGroup,
    edges: Vec<GainEdge>,
}

impl GainGraph {
    /// Every base edge `{u, v}` (`u < v`) becomes one link `u → v` per group
    /// element, gains ascending, followed by one half edge per vertex of `x`.
    pub fn expand(base: &SimpleGraph, x: VertexSet, group: &FiniteGroup) -> GainGraph {
        let x = x.intersection(base.vertices());
        let mut edges = Vec::with_capacity(base.edge_count() * group.order() + x.len());
        for &(u, v) in base.edges() {
            edges.extend((0..group.order()).map(|gain| GainEdge::Link { tail: u, head: v, gain }));
        }
        edges.extend(x.iter().map(|vertex| GainEdge::Half { vertex }));
        GainGraph { base: base.clone(), half_edges: x, group: group.clone(), edges }
    }

    /// The same gain graph with every link stored in the opposite
    /// orientation and its gain inverted.
    pub fn reoriented(&self) -> GainGraph {
        let edges = self
            .edges
            .iter()
            .map(|&e| match e {
                GainEdge::Link { tail, head, gain } => GainEdge::Link { tail: head, head: tail, gain: self.group.inv(gain) },
                half => half,
            })
            .collect();
        GainGraph { edges, ..self.clone() }
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &SimpleGraph {
        &self.base
    }

    pub fn half_edges(&self) -> VertexSet {
        self.half_edges
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn edges(&self) -> &[GainEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::all(self.edges.len())
    }

    /// Vertices incident to the edges of `s`.
    pub fn support(&self, s: EdgeSubset) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, e| match self.edges[e] {
            GainEdge::Link { tail, head, .. } => acc.with(tail).with(head),
            GainEdge::Half { vertex } => acc.with(vertex),
        })
    }

    /// Gain of a closed walk given as a sequence of `(edge, forward)` steps.
    pub fn walk_gain(&self, steps: &[(usize, bool)]) -> usize {
        steps.iter().fold(0, |acc, &(e, forward)| match self.edges[e] {
            GainEdge::Link { gain, .. } => self.group.mul(acc, if forward { gain } else { self.group.inv(gain) }),
            GainEdge::Half { .. } => acc,
        })
    }

    /// Number of balanced components of the spanning subgraph `(V, s)`,
    /// found by propagating potentials breadth-first from each root.
    pub fn balanced_components(&self, s: EdgeSubset) -> usize {
        const NONE: u8 = u8::MAX;
        let n = self.n();
        let mut first = [NONE; MAX_VERTICES];
        let mut next = [NONE; 2 * MAX_SUBSET_EDGES];
        let mut target = [0u8; 2 * MAX_SUBSET_EDGES];
        let mut step_gain = [0u32; 2 * MAX_SUBSET_EDGES];
        let mut slots = 0usize;
        let mut has_half = 0u32;
        for e in s.iter() {
            match self.edges[e] {
                GainEdge::Link { tail, head, gain } => {
                    for (from, to, g) in [(tail, head, gain), (head, tail, self.group.inv(gain))] {
                        target[slots] = to as u8;
                        step_gain[slots] = g as u32;
                        next[slots] = first[from];
                        first[from] = slots as u8;
                        slots += 1;
                    }
                }
                GainEdge::Half { vertex } => has_half |= 1 << vertex,
            }
        }
        let mut potential = [0u32; MAX_VERTICES];
        let mut seen = 0u32;
        let mut queue = [0u8; MAX_VERTICES];
        let mut balanced = 0;
        for root in 0..n {
            if seen >> root & 1 == 1 {
                continue;
            }
            seen |= 1 << root;
            potential[root] = 0;
            queue[0] = root as u8;
            let (mut read, mut write) = (0, 1);
            let mut ok = true;
            while read < write {
                let u = queue[read] as usize;
                read += 1;
                if has_half >> u & 1 == 1 {
                    ok = false;
                }
                let mut slot = first[u];
                while slot != NONE {
                    let w = target[slot as usize] as usize;
                    let expected = self.group.mul(potential[u] as usize, step_gain[slot as usize] as usize) as u32;
                    if seen >> w & 1 == 0 {
                        seen |= 1 << w;
                        potential[w] = expected;
                        queue[write] = w as u8;
                        write += 1;
                    } else if potential[w] != expected {
                        ok = false;
                    }
                    slot = next[slot as usize];
                }
            }
            if ok {
                balanced += 1;
            }
        }
        balanced
    }

    /// Frame-matroid rank `|V| - b(S)`.
    pub fn rank(&self, s: EdgeSubset) -> usize {
        self.n() - self.balanced_components(s)
    }
}

#[derive(Clone, Copy, Debug)]
enum Undo {
    Unbalance { prev_flags: u32 },
    Merge { child: u8, root: u8, prev_flags: u32, prev_balanced: u8 },
}

/// Union-find over the vertices of a gain graph in which every node carries
/// its gain relative to its parent, so that balance can be maintained while
/// edges are added. Supports rollback to a checkpoint; union by size keeps
/// finds logarithmic without path compression.
#[derive(Clone, Debug)]
pub struct BalanceTracker<'g> {
    group: &'g FiniteGroup,
    parent: [u8; MAX_VERTICES],
    /// `θ(x) = θ(parent(x))·rel[x]`.
    rel: [u32; MAX_VERTICES],
    size: [u8; MAX_VERTICES],
    /// Roots of unbalanced components.
    unbalanced: u32,
    balanced: u8,
    history: Vec<Undo>,
}

impl<'g> BalanceTracker<'g> {
    pub fn new(n: usize, group: &'g FiniteGroup) -> Self {
        let mut parent = [0u8; MAX_VERTICES];
        for (v, p) in parent.iter_mut().enumerate() {
            *p = v as u8;
        }
        BalanceTracker {
            group,
            parent,
            rel: [0; MAX_VERTICES],
            size: [1; MAX_VERTICES],
            unbalanced: 0,
            balanced: n as u8,
            history: Vec::new(),
        }
    }

    /// Number of balanced components so far.
    pub fn balanced_components(&self) -> usize {
        self.balanced as usize
    }

    /// Root of `x` and the gain `R` with `θ(x) = θ(root)·R`.
    fn find(&self, mut x: usize) -> (usize, usize) {
        let mut acc = 0usize;
        let mut first = true;
        while self.parent[x] as usize != x {
            acc = if first { self.rel[x] as usize } else { self.group.mul(self.rel[x] as usize, acc) };
            first = false;
            x = self.parent[x] as usize;
        }
        (x, acc)
    }

    pub fn add(&mut self, edge: GainEdge) {
        match edge {
            GainEdge::Link { tail, head, gain } => self.add_link(tail, head, gain),
            GainEdge::Half { vertex } => self.add_half(vertex),
        }
    }

    fn mark_unbalanced(&mut self, root: usize) {
        if self.unbalanced >> root & 1 == 0 {
            self.history.push(Undo::Unbalance { prev_flags: self.unbalanced });
            self.unbalanced |= 1 << root;
            self.balanced -= 1;
        }
    }

    pub fn add_half(&mut self, vertex: usize) {
        let (root, _) = self.find(vertex);
        self.mark_unbalanced(root);
    }

    pub fn add_link(&mut self, tail: usize, head: usize, gain: usize) {
        let g = self.group;
        let (rt, pt) = self.find(tail);
        let (rh, ph) = self.find(head);
        if rt == rh {
            if ph != g.mul(pt, gain) {
                self.mark_unbalanced(rt);
            }
            return;
        }
        let prev_flags = self.unbalanced;
        let prev_balanced = self.balanced;
        let (root, child, rel) = if self.size[rt] >= self.size[rh] {
            // θ(rh) = θ(rt)·pt·gain·ph⁻¹
            (rt, rh, g.mul(g.mul(pt, gain), g.inv(ph)))
        } else {
            // θ(rt) = θ(rh)·ph·gain⁻¹·pt⁻¹
            (rh, rt, g.mul(g.mul(ph, g.inv(gain)), g.inv(pt)))
        };
        let root_bad = self.unbalanced >> root & 1 == 1;
        let child_bad = self.unbalanced >> child & 1 == 1;
        self.balanced -= (!root_bad) as u8 + (!child_bad) as u8;
        if root_bad || child_bad {
            self.unbalanced |= 1 << root;
        } else {
            self.balanced += 1;
        }
        self.unbalanced &= !(1 << child);
        self.parent[child] = root as u8;
        self.rel[child] = rel as u32;
        self.size[root] += self.size[child];
        self.history.push(Undo::Merge { child: child as u8, root: root as u8, prev_flags, prev_balanced });
    }

    pub fn checkpoint(&self) -> usize {
        self.history.len()
    }

    pub fn rollback(&mut self, checkpoint: usize) {
        while self.history.len() > checkpoint {
            match self.history.pop().expect("history entry") {
                Undo::Unbalance { prev_flags } => {
                    self.unbalanced = prev_flags;
                    self.balanced += 1;
                }
                Undo::Merge { child, root, prev_flags, prev_balanced } => {
                    let (child, root) = (child as usize, root as usize);
                    self.parent[child] = child as u8;
                    self.rel[child] = 0;
                    self.size[root] -= self.size[child];
                    self.unbalanced = prev_flags;
                    self.balanced = prev_balanced;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn cyclic_groups() {
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(t, FiniteGroup::trivial());
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(z2.table_rows(), vec![vec![0, 1], vec![1, 0]]);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(z4.inv(1), 3);
        assert_eq!(FiniteGroup::cyclic(0), Err(GroupError::Empty));
    }

    #[test]
    fn products() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let k4 = FiniteGroup::direct_product(&z2, &z2);
        assert_eq!(k4.order(), 4);
        assert!((1..4).all(|a| k4.inv(a) == a));
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let z6 = FiniteGroup::direct_product(&z2, &z3);
        assert_eq!(z6.order(), 6);
        // (1,1) has index 1·3 + 1
        assert_eq!(z6.element_order(4), 6);
        let copy = FiniteGroup::direct_product(&FiniteGroup::trivial(), &z3);
        assert_eq!(copy, z3);
        // revalidates
        assert_eq!(FiniteGroup::from_table(z6.table_rows()).unwrap(), z6);
    }

    #[test]
    fn symmetric_group_is_nonabelian() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert!(FiniteGroup::cyclic(6).unwrap().is_abelian());
    }

    #[test]
    fn table_validation() {
        assert_eq!(FiniteGroup::from_table(vec![]), Err(GroupError::Empty));
        assert_eq!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 2]]), Err(GroupError::NotClosed(1, 1)));
        assert_eq!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]), Err(GroupError::NoIdentity));
        assert_eq!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]), Err(GroupError::NoInverse(1)));
        // a Latin square with identity 0 that is not associative
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(rows), Err(GroupError::NotAssociative(..))));
    }

    #[test]
    fn group_specs() {
        assert_eq!(parse_group("Z4").unwrap().order(), 4);
        let k4 = parse_group("Z2xZ2").unwrap();
        assert_eq!(k4.order(), 4);
        assert!(!(0..4).any(|a| k4.element_order(a) == 4));
        assert_eq!(parse_group(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap(), FiniteGroup::cyclic(2).unwrap());
        assert!(parse_group("Q8").is_err());
        assert!(parse_group("Z").is_err());
        let json = serde_json::to_string(&k4).unwrap();
        assert_eq!(parse_group(&json).unwrap(), k4);
    }

    #[test]
    fn expansion_edge_counts() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p2 = parse_graph("P2").unwrap();
        assert_eq!(GainGraph::expand(&p2, p2.vertices(), &z2).edge_count(), 7);
        let k2 = parse_graph("K2").unwrap();
        let t = GainGraph::expand(&k2, VertexSet::EMPTY, &FiniteGroup::trivial());
        assert_eq!(t.edges(), &[GainEdge::Link { tail: 0, head: 1, gain: 0 }]);
        let k3 = parse_graph("K3").unwrap();
        let phi = GainGraph::expand(&k3, k3.vertices(), &FiniteGroup::cyclic(3).unwrap());
        assert_eq!(phi.edge_count(), 12);
        assert_eq!(phi.edges()[3], GainEdge::Link { tail: 0, head: 2, gain: 0 });
        assert_eq!(phi.edges()[9], GainEdge::Half { vertex: 0 });
    }

    #[test]
    fn balance_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p2 = parse_graph("P2").unwrap();
        let phi = GainGraph::expand(&p2, p2.vertices(), &z2);
        assert_eq!(phi.balanced_components(EdgeSubset::EMPTY), 3);
        // half edge at v1 is edge 4
        assert_eq!(phi.balanced_components(EdgeSubset::from_indices([4])), 2);
        let k2 = parse_graph("K2").unwrap();
        let digon = GainGraph::expand(&k2, VertexSet::EMPTY, &z2);
        assert_eq!(digon.balanced_components(EdgeSubset::from_indices([0, 1])), 0);
        assert_eq!(digon.balanced_components(EdgeSubset::from_indices([1])), 1);
    }

    #[test]
    fn rank_examples() {
        let p2 = parse_graph("P2").unwrap();
        let trivial = GainGraph::expand(&p2, VertexSet::EMPTY, &FiniteGroup::trivial());
        assert_eq!(trivial.rank(EdgeSubset::EMPTY), 0);
        assert_eq!(trivial.rank(trivial.all_edges()), 2);
        let z2 = GainGraph::expand(&p2, VertexSet::EMPTY, &FiniteGroup::cyclic(2).unwrap());
        assert_eq!(z2.rank(z2.all_edges()), 3);
    }

    #[test]
    fn tracker_matches_bfs_with_rollback() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let k3 = parse_graph("K3").unwrap();
        let phi = GainGraph::expand(&k3, VertexSet::from_indices([2]), &s3);
        let m = phi.edge_count();
        let mut tracker = BalanceTracker::new(phi.n(), phi.group());
        // walk a fixed pseudo-random sequence of subsets through one tracker
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..500 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let s = EdgeSubset::from_bits(state & ((1 << m) - 1));
            let cp = tracker.checkpoint();
            for e in s.iter() {
                tracker.add(phi.edges()[e]);
            }
            assert_eq!(tracker.balanced_components(), phi.balanced_components(s));
            tracker.rollback(cp);
            assert_eq!(tracker.balanced_components(), 3);
        }
    }
}
