//! Chromatic polynomials of graphs and of their group expansions.
//!
//! Three independent routes are provided for an expansion `𝔊·Γ^(X)`:
//! the defining sum over all edge subsets of the gain graph
//! ([`chromatic_subset_expansion`]), the reduction of the full expansion to
//! the base graph ([`chromatic_full`]), and the alternating sum over stable
//! sets outside `X` that yields the partial expansion as a polynomial in
//! both λ and γ ([`chromatic_partial`]).

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexSet};
use crate::group::{BalanceTracker, GainGraph, MAX_SUBSET_EDGES};
use crate::poly::{expansion_substitute, BivariatePolynomial, IntPolynomial, UnitShift};

/// Default limit on the number of edges for full subset enumeration.
pub const DEFAULT_EDGE_CAP: usize = 26;

/// How the balanced-component count is obtained for each subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// A new union-find per subset, subsets in increasing bitmask order.
    Fresh,
    /// Depth-first over include/exclude decisions with rollback.
    Incremental,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub cap: usize,
    pub mode: SweepMode,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { cap: DEFAULT_EDGE_CAP, mode: SweepMode::Incremental, parallel: true }
    }
}

impl SweepOptions {
    pub fn with_cap(cap: usize) -> Self {
        SweepOptions { cap, ..Default::default() }
    }
}

/// Signed counts of edge subsets by number of balanced components:
/// `counts[b]` is `#{S : b(S) = b, |S| even} - #{S : b(S) = b, |S| odd}`.
type Histogram = Vec<i64>;

fn merge(mut a: Histogram, b: Histogram) -> Histogram {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Number of leading edges whose include/exclude choices split the work
/// into independent tasks.
const SPLIT_BITS: usize = 6;

fn sweep_fresh(phi: &GainGraph, masks: std::ops::Range<u64>) -> Histogram {
    let mut hist = vec![0i64; phi.n() + 1];
    let edges = phi.edges();
    for mask in masks {
        let mut tracker = BalanceTracker::new(phi.n(), phi.group());
        let mut bits = mask;
        while bits != 0 {
            tracker.add(edges[bits.trailing_zeros() as usize]);
            bits &= bits - 1;
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        hist[tracker.balanced_components()] += sign;
    }
    hist
}

fn sweep_incremental(phi: &GainGraph, prefix_len: usize, prefix: u64) -> Histogram {
    fn walk(phi: &GainGraph, tracker: &mut BalanceTracker<'_>, next: usize, odd: bool, hist: &mut Histogram) {
        if next == phi.edge_count() {
            hist[tracker.balanced_components()] += if odd { -1 } else { 1 };
            return;
        }
        walk(phi, tracker, next + 1, odd, hist);
        let cp = tracker.checkpoint();
        tracker.add(phi.edges()[next]);
        walk(phi, tracker, next + 1, !odd, hist);
        tracker.rollback(cp);
    }
    let mut hist = vec![0i64; phi.n() + 1];
    let mut tracker = BalanceTracker::new(phi.n(), phi.group());
    for e in 0..prefix_len {
        if prefix >> e & 1 == 1 {
            tracker.add(phi.edges()[e]);
        }
    }
    walk(phi, &mut tracker, prefix_len, prefix.count_ones() % 2 == 1, &mut hist);
    hist
}

fn balance_histogram(phi: &GainGraph, options: &SweepOptions) -> Result<Histogram> {
    let m = phi.edge_count();
    let cap = options.cap.min(MAX_SUBSET_EDGES - 1);
    if m > cap {
        return Err(Error::EdgeCapExceeded { edges: m, cap });
    }
    let empty = vec![0i64; phi.n() + 1];
    let hist = match options.mode {
        SweepMode::Fresh => {
            let total = 1u64 << m;
            let chunk = (total >> SPLIT_BITS).max(1);
            let ranges: Vec<_> = (0..total).step_by(chunk as usize).map(|s| s..(s + chunk).min(total)).collect();
            if options.parallel {
                ranges.into_par_iter().map(|r| sweep_fresh(phi, r)).reduce(|| empty.clone(), merge)
            } else {
                ranges.into_iter().map(|r| sweep_fresh(phi, r)).fold(empty, merge)
            }
        }
        SweepMode::Incremental => {
            let split = m.min(SPLIT_BITS);
            let tasks = 0..(1u64 << split);
            if options.parallel {
                tasks.into_par_iter().map(|p| sweep_incremental(phi, split, p)).reduce(|| empty.clone(), merge)
            } else {
                tasks.map(|p| sweep_incremental(phi, split, p)).fold(empty, merge)
            }
        }
    };
    Ok(hist)
}

/// `χ_Φ(λ) = Σ_{S ⊆ E} (-1)^{|S|} λ^{b(S)}` by enumerating every subset.
pub fn chromatic_subset_expansion(phi: &GainGraph, options: &SweepOptions) -> Result<IntPolynomial> {
    let hist = balance_histogram(phi, options)?;
    Ok(IntPolynomial::from_coeffs(hist.into_iter().map(BigInt::from).collect()))
}

/// Memo for [`chromatic_graph`], keyed by vertex count and adjacency.
#[derive(Default, Debug)]
pub struct ChromaticCache {
    memo: HashMap<(usize, Vec<u32>), IntPolynomial>,
}

fn drop_vertex(adj: &[u32], v: usize) -> Vec<u32> {
    let low = (1u32 << v) - 1;
    adj.iter()
        .enumerate()
        .filter(|&(w, _)| w != v)
        .map(|(_, &bits)| {
            let bits = bits & !(1 << v);
            (bits & low) | ((bits >> 1) & !low)
        })
        .collect()
}

fn falling_factorial(n: usize) -> IntPolynomial {
    (0..n).fold(IntPolynomial::one(), |acc, k| &acc * &IntPolynomial::from_i64s(&[-(k as i64), 1]))
}

impl ChromaticCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Ordinary chromatic polynomial, monic of degree `n`.
    pub fn chromatic(&mut self, g: &SimpleGraph) -> IntPolynomial {
        let adj: Vec<u32> = (0..g.n()).map(|v| g.neighbors(v).bits()).collect();
        self.solve(adj)
    }

    fn solve(&mut self, adj: Vec<u32>) -> IntPolynomial {
        let n = adj.len();
        let edges: u32 = adj.iter().map(|b| b.count_ones()).sum::<u32>() / 2;
        if edges == 0 {
            return IntPolynomial::monomial(1, n);
        }
        if edges as usize == n * (n - 1) / 2 {
            return falling_factorial(n);
        }
        let key = (n, adj);
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let adj = &key.1;
        let result = self.reduce(adj);
        self.memo.insert(key, result.clone());
        result
    }

    fn reduce(&mut self, adj: &[u32]) -> IntPolynomial {
        let n = adj.len();
        let lambda = IntPolynomial::var();
        if let Some(v) = (0..n).find(|&v| adj[v] == 0) {
            return &lambda * &self.solve(drop_vertex(adj, v));
        }
        // product rule over components
        let mut block = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0;
            for v in (0..n).filter(|&v| frontier >> v & 1 == 1) {
                next |= adj[v];
            }
            frontier = next & !block;
            block |= next;
        }
        if block.count_ones() as usize != n {
            let inside: Vec<usize> = (0..n).filter(|&v| block >> v & 1 == 1).collect();
            let outside: Vec<usize> = (0..n).filter(|&v| block >> v & 1 == 0).collect();
            let a = self.solve(induced(adj, &inside));
            let b = self.solve(induced(adj, &outside));
            return &a * &b;
        }
        if let Some(v) = (0..n).find(|&v| adj[v].count_ones() == 1) {
            let pendant = IntPolynomial::from_i64s(&[-1, 1]);
            return &pendant * &self.solve(drop_vertex(adj, v));
        }
        // deletion–contraction on an edge at a vertex of minimum degree
        let u = (0..n).min_by_key(|&v| adj[v].count_ones()).expect("vertex");
        let v = adj[u].trailing_zeros() as usize;
        let mut deleted = adj.to_vec();
        deleted[u] &= !(1 << v);
        deleted[v] &= !(1 << u);
        let mut merged = deleted.clone();
        let moved = merged[v];
        merged[u] |= moved;
        for w in (0..n).filter(|&w| moved >> w & 1 == 1) {
            merged[w] |= 1 << u;
        }
        let contracted = drop_vertex(&merged, v);
        &self.solve(deleted) - &self.solve(contracted)
    }
}

fn induced(adj: &[u32], keep: &[usize]) -> Vec<u32> {
    keep.iter()
        .map(|&v| {
            keep.iter()
                .enumerate()
                .filter(|&(_, &w)| adj[v] >> w & 1 == 1)
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        })
        .collect()
}

/// Ordinary chromatic polynomial of a simple graph; `1` for the graph with
/// no vertices.
pub fn chromatic_graph(g: &SimpleGraph) -> IntPolynomial {
    ChromaticCache::new().chromatic(g)
}

/// `γ^n χ_Γ((λ-1)/γ)` as a polynomial in λ and γ.
pub fn chromatic_full_symbolic(g: &SimpleGraph) -> BivariatePolynomial {
    expansion_substitute(&chromatic_graph(g), g.n(), UnitShift::Minus).expect("chromatic polynomial is monic of degree n")
}

/// Chromatic polynomial of the full expansion for a group of order `gamma`.
pub fn chromatic_full(g: &SimpleGraph, gamma: u64) -> IntPolynomial {
    chromatic_full_symbolic(g).specialize(&BigInt::from(gamma))
}

/// Signless chromatic polynomial of `𝔊·Γ^(X)` in λ and γ, as the
/// alternating sum over stable `Y ⊆ X^c` of the full expansions of `Γ∖Y`.
pub fn chromatic_partial(g: &SimpleGraph, x: VertexSet) -> BivariatePolynomial {
    chromatic_partial_with(g, x, &mut ChromaticCache::new())
}

pub fn chromatic_partial_with(g: &SimpleGraph, x: VertexSet, cache: &mut ChromaticCache) -> BivariatePolynomial {
    let n = g.n();
    let outside = x.complement(n);
    let mut total = BivariatePolynomial::zero(n);
    for y in g.stable_sets(outside, n) {
        let rest = g.delete_vertices(y).graph;
        let signless = cache.chromatic(&rest).signless(rest.n());
        let term = expansion_substitute(&signless, rest.n(), UnitShift::Plus)
            .expect("chromatic polynomial is monic of degree n")
            .reframe(n);
        let term = if y.len() % 2 == 1 { term.scale(&BigInt::from(-1)) } else { term };
        total = total.add(&term);
    }
    debug_assert!(total.is_monic());
    total
}

/// Number of `i`-edge subsets with no broken circuit, edges ordered
/// lexicographically by endpoints.
pub fn nbc_count(g: &SimpleGraph, i: usize) -> BigInt {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    nbc_count_with_order(g, i, &order)
}

/// As [`nbc_count`], with `order[k]` the index (into `g.edges()`) of the
/// `k`-th smallest edge.
///
/// A set contains a broken circuit exactly when some edge `e` has its ends
/// joined by the set's edges smaller than `e`, so edges are scanned in
/// order and a branch is cut as soon as that happens.
pub fn nbc_count_with_order(g: &SimpleGraph, i: usize, order: &[usize]) -> BigInt {
    assert_eq!(order.len(), g.edge_count(), "edge order must be a permutation");
    let edges: Vec<(usize, usize)> = order.iter().map(|&k| g.edges()[k]).collect();

    fn root(parent: &[usize], mut v: usize) -> usize {
        while parent[v] != v {
            v = parent[v];
        }
        v
    }

    fn walk(edges: &[(usize, usize)], next: usize, room: usize, parent: &mut Vec<usize>) -> u64 {
        if room == 0 {
            // remaining edges are all excluded; they must not close a path
            return edges[next..]
                .iter()
                .all(|&(u, v)| root(parent, u) != root(parent, v)) as u64;
        }
        if edges.len() - next < room {
            return 0;
        }
        let (u, v) = edges[next];
        let (ru, rv) = (root(parent, u), root(parent, v));
        if ru == rv {
            return 0;
        }
        let skip = walk(edges, next + 1, room, parent);
        parent[rv] = ru;
        let take = walk(edges, next + 1, room - 1, parent);
        parent[rv] = rv;
        skip + take
    }

    let mut parent: Vec<usize> = (0..g.n()).collect();
    BigInt::from(walk(&edges, 0, i, &mut parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::group::FiniteGroup;
    use crate::poly::GammaPolynomial;

    fn g(s: &str) -> SimpleGraph {
        parse_graph(s).unwrap()
    }

    fn lam(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn graph_chromatic_examples() {
        assert_eq!(chromatic_graph(&g("E3")), IntPolynomial::monomial(1, 3));
        assert_eq!(chromatic_graph(&g("P2")), lam(&[0, 1, -2, 1]));
        assert_eq!(chromatic_graph(&g("K3")), lam(&[0, 2, -3, 1]));
        // C4: (λ-1)^4 + (λ-1)
        assert_eq!(chromatic_graph(&g("C4")), lam(&[0, -3, 6, -4, 1]));
        assert_eq!(chromatic_graph(&SimpleGraph::edgeless(0)), IntPolynomial::one());
    }

    #[test]
    fn subset_expansion_examples() {
        let t = FiniteGroup::trivial();
        let e2 = g("E2");
        let phi = GainGraph::expand(&e2, VertexSet::EMPTY, &t);
        assert_eq!(chromatic_subset_expansion(&phi, &SweepOptions::default()).unwrap(), IntPolynomial::monomial(1, 2));
        let k2 = g("K2");
        let phi = GainGraph::expand(&k2, k2.vertices(), &t);
        assert_eq!(chromatic_subset_expansion(&phi, &SweepOptions::default()).unwrap(), lam(&[2, -3, 1]));
        let p2 = g("P2");
        let phi = GainGraph::expand(&p2, p2.vertices(), &FiniteGroup::cyclic(2).unwrap());
        assert_eq!(chromatic_subset_expansion(&phi, &SweepOptions::default()).unwrap(), lam(&[-9, 15, -7, 1]));
    }

    #[test]
    fn sweep_modes_agree() {
        let k3 = g("K3");
        let phi = GainGraph::expand(&k3, VertexSet::from_indices([0]), &FiniteGroup::symmetric(3).unwrap());
        let mut results = Vec::new();
        for mode in [SweepMode::Fresh, SweepMode::Incremental] {
            for parallel in [false, true] {
                let opts = SweepOptions { cap: 26, mode, parallel };
                results.push(chromatic_subset_expansion(&phi, &opts).unwrap());
            }
        }
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let k4 = g("K4");
        let phi = GainGraph::expand(&k4, VertexSet::EMPTY, &FiniteGroup::cyclic(3).unwrap());
        assert_eq!(
            chromatic_subset_expansion(&phi, &SweepOptions::with_cap(10)),
            Err(Error::EdgeCapExceeded { edges: 18, cap: 10 })
        );
    }

    #[test]
    fn full_expansion_examples() {
        let p2 = g("P2");
        assert_eq!(chromatic_full(&p2, 1), lam(&[-4, 8, -5, 1]));
        assert_eq!(chromatic_full(&p2, 2), lam(&[-9, 15, -7, 1]));
        assert_eq!(chromatic_full(&g("E1"), 5), lam(&[-1, 1]));
    }

    #[test]
    fn full_path_factors() {
        // (λ-1)(λ-1-γ)^2
        let linear = |c: &[i64]| {
            BivariatePolynomial::from_rows(1, vec![GammaPolynomial::one(), GammaPolynomial::from_i64s(c)]).unwrap()
        };
        let product = linear(&[-1]).mul(&linear(&[-1, -1])).mul(&linear(&[-1, -1]));
        assert_eq!(chromatic_full_symbolic(&g("P2")), product);
    }

    #[test]
    fn partial_expansion_examples() {
        let p2 = g("P2");
        let full = chromatic_partial(&p2, p2.vertices());
        let rows: Vec<String> = full.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["1", "3 + 2g", "3 + 4g + g^2", "1 + 2g + g^2"]);
        let none = chromatic_partial(&p2, VertexSet::EMPTY);
        let rows: Vec<String> = none.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["1", "2g", "-2 + 2g + g^2", "-1 + g^2"]);
        let e1 = chromatic_partial(&g("E1"), VertexSet::EMPTY);
        assert_eq!(e1.specialize(&BigInt::from(3)), IntPolynomial::var());
    }

    #[test]
    fn nbc_examples() {
        let k3 = g("K3");
        assert_eq!(nbc_count(&k3, 0), BigInt::from(1));
        assert_eq!(nbc_count(&k3, 1), BigInt::from(3));
        assert_eq!(nbc_count(&k3, 2), BigInt::from(2));
        assert_eq!(nbc_count(&k3, 3), BigInt::from(0));
        assert_eq!(nbc_count_with_order(&k3, 2, &[2, 0, 1]), BigInt::from(2));
    }
}
