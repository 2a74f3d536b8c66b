//! Frame-matroid oracle: characteristic polynomials from the rank function,
//! circuit classification, and the cross-check of every chromatic route.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chromatic::{chromatic_partial_with, chromatic_subset_expansion, SweepOptions};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexSet};
use crate::group::{EdgeSubset, FiniteGroup, GainEdge, GainGraph, MAX_SUBSET_EDGES};
use crate::poly::{BivariatePolynomial, IntPolynomial};
use crate::whitney::WhitneyEngine;

/// Default limit on the number of edges for rank-based enumeration.
pub const DEFAULT_MATROID_CAP: usize = 22;

/// Largest gain graph [`classify_circuit`] accepts.
pub const CLASSIFY_CAP: usize = 14;

/// `p(λ) = Σ_S (-1)^{|S|} λ^{rk(E) - rk(S)}` and `b(Φ) = b(E)`.
pub fn characteristic_from_ranks(phi: &GainGraph, cap: usize) -> Result<(IntPolynomial, usize)> {
    let m = phi.edge_count();
    let cap = cap.min(MAX_SUBSET_EDGES - 1);
    if m > cap {
        return Err(Error::EdgeCapExceeded { edges: m, cap });
    }
    let full_rank = phi.rank(phi.all_edges());
    let total = 1u64 << m;
    let chunk = (total >> 6).max(1);
    let ranges: Vec<_> = (0..total).step_by(chunk as usize).map(|s| s..(s + chunk).min(total)).collect();
    let hist = ranges
        .into_par_iter()
        .map(|range| {
            let mut h = vec![0i64; full_rank + 1];
            for mask in range {
                let s = EdgeSubset::from_bits(mask);
                let sign = if s.len().is_multiple_of(2) { 1 } else { -1 };
                h[full_rank - phi.rank(s)] += sign;
            }
            h
        })
        .reduce(
            || vec![0i64; full_rank + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let p = IntPolynomial::from_coeffs(hist.into_iter().map(BigInt::from).collect());
    Ok((p, phi.n() - full_rank))
}

/// `λ^{b(Φ)}·p(λ)`, which must equal the chromatic polynomial.
pub fn chromatic_from_ranks(phi: &GainGraph, cap: usize) -> Result<IntPolynomial> {
    let (p, b) = characteristic_from_ranks(phi, cap)?;
    Ok(p.shift(b))
}

/// The three kinds of frame-matroid circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CircuitClass {
    /// Not a minimal dependent set.
    NotACircuit,
    /// C1: a circle with neutral gain.
    NeutralCircle,
    /// C2: two non-neutral circles or half edges joined by a minimal path,
    /// possibly of length zero.
    JoinedFigures,
    /// C3: a theta whose three circles are all non-neutral.
    UnbalancedTheta,
    /// Minimal dependent but matches none of the three shapes.
    Unclassified,
}

impl CircuitClass {
    pub fn label(self) -> &'static str {
        match self {
            CircuitClass::NotACircuit => "none",
            CircuitClass::NeutralCircle => "C1",
            CircuitClass::JoinedFigures => "C2",
            CircuitClass::UnbalancedTheta => "C3",
            CircuitClass::Unclassified => "unclassified",
        }
    }
}

/// Minimal rank-deficiency: `rk(S) < |S|` and `rk(S∖e) = |S| - 1` for all `e`.
pub fn is_circuit(phi: &GainGraph, s: EdgeSubset) -> bool {
    let size = s.len();
    size > 0 && phi.rank(s) < size && s.iter().all(|e| phi.rank(s.without(e)) == size - 1)
}

fn link_ends(phi: &GainGraph, e: usize) -> Option<(usize, usize)> {
    match phi.edges()[e] {
        GainEdge::Link { tail, head, .. } => Some((tail, head)),
        GainEdge::Half { .. } => None,
    }
}

/// Vertices touched by links of `s`, with the degree of each.
fn link_degrees(phi: &GainGraph, s: EdgeSubset) -> [u8; 32] {
    let mut deg = [0u8; 32];
    for e in s.iter() {
        if let Some((u, v)) = link_ends(phi, e) {
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    deg
}

fn links_connected(phi: &GainGraph, s: EdgeSubset) -> bool {
    let support = phi.support(s);
    let Some(start) = support.iter().next() else {
        return true;
    };
    let mut reached = VertexSet::singleton(start);
    loop {
        let mut grown = reached;
        for e in s.iter() {
            if let Some((u, v)) = link_ends(phi, e) {
                if reached.contains(u) || reached.contains(v) {
                    grown = grown.with(u).with(v);
                }
            }
        }
        if grown == reached {
            return reached == support;
        }
        reached = grown;
    }
}

/// Whether the links `s` form a single circle (digons included).
fn is_circle(phi: &GainGraph, s: EdgeSubset) -> bool {
    !s.is_empty()
        && s.iter().all(|e| link_ends(phi, e).is_some())
        && link_degrees(phi, s).iter().all(|&d| d == 0 || d == 2)
        && links_connected(phi, s)
}

/// Gain around a circle, starting anywhere; only neutrality is meaningful.
fn circle_is_neutral(phi: &GainGraph, circle: EdgeSubset) -> bool {
    let mut remaining = circle;
    let first = remaining.iter().next().expect("nonempty circle");
    let (start, mut at) = link_ends(phi, first).expect("link");
    let mut steps = vec![(first, true)];
    remaining = remaining.without(first);
    while !remaining.is_empty() {
        let e = remaining
            .iter()
            .find(|&e| link_ends(phi, e).is_some_and(|(u, v)| u == at || v == at))
            .expect("circle continues");
        let (u, v) = link_ends(phi, e).expect("link");
        let forward = u == at;
        at = if forward { v } else { u };
        steps.push((e, forward));
        remaining = remaining.without(e);
    }
    debug_assert_eq!(at, start);
    phi.walk_gain(&steps) == phi.group().identity()
}

/// Whether `rest` is a simple path from a vertex of `a` to a vertex of `b`
/// meeting `a ∪ b` only at its ends.
fn is_connecting_path(phi: &GainGraph, rest: EdgeSubset, a: VertexSet, b: VertexSet) -> bool {
    let deg = link_degrees(phi, rest);
    let support = phi.support(rest);
    let ends: Vec<usize> = support.iter().filter(|&v| deg[v] == 1).collect();
    if ends.len() != 2 || support.iter().any(|v| deg[v] > 2) || !links_connected(phi, rest) {
        return false;
    }
    if rest.len() + 1 != support.len() {
        return false;
    }
    let (p, q) = (ends[0], ends[1]);
    let touches = (a.contains(p) && b.contains(q)) || (a.contains(q) && b.contains(p));
    let interior = support.without(p).without(q);
    touches && interior.intersection(a.union(b)).is_empty()
}

/// Classifies an edge set against the three circuit shapes, after first
/// checking minimal rank-deficiency.
pub fn classify_circuit(phi: &GainGraph, s: EdgeSubset) -> Result<CircuitClass> {
    if phi.edge_count() > CLASSIFY_CAP {
        return Err(Error::EdgeCapExceeded { edges: phi.edge_count(), cap: CLASSIFY_CAP });
    }
    if !is_circuit(phi, s) {
        return Ok(CircuitClass::NotACircuit);
    }
    Ok(classify_shape(phi, s))
}

fn classify_shape(phi: &GainGraph, s: EdgeSubset) -> CircuitClass {
    let halves: Vec<usize> = s
        .iter()
        .filter_map(|e| match phi.edges()[e] {
            GainEdge::Half { vertex } => Some(vertex),
            GainEdge::Link { .. } => None,
        })
        .collect();
    let links = EdgeSubset::from_indices(s.iter().filter(|&e| link_ends(phi, e).is_some()));
    if !links_connected(phi, s) && !(links.is_empty() && halves.len() == 1) {
        return CircuitClass::Unclassified;
    }
    // every circle inside the link set, by brute force over its subsets
    let members: Vec<usize> = links.iter().collect();
    let circles: Vec<EdgeSubset> = (1u64..1 << members.len())
        .map(|mask| EdgeSubset::from_indices(members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)))
        .filter(|&c| is_circle(phi, c))
        .collect();
    let neutral: Vec<bool> = circles.iter().map(|&c| circle_is_neutral(phi, c)).collect();
    let vertices = |c: EdgeSubset| phi.support(c);

    match (halves.len(), circles.len()) {
        (0, 1) if circles[0] == links && neutral[0] => CircuitClass::NeutralCircle,
        (0, 3)
            if neutral.iter().all(|&z| !z)
                && circles[0].union(circles[1]).union(circles[2]) == links
                && links.len() == phi.support(links).len() + 1 =>
        {
            CircuitClass::UnbalancedTheta
        }
        (0, 2) | (1, 1) | (2, 0) => {
            let (figure_a, figure_b, covered) = match halves.len() {
                0 => (vertices(circles[0]), vertices(circles[1]), circles[0].union(circles[1])),
                1 => (VertexSet::singleton(halves[0]), vertices(circles[0]), circles[0]),
                _ => (VertexSet::singleton(halves[0]), VertexSet::singleton(halves[1]), EdgeSubset::EMPTY),
            };
            if neutral.iter().any(|&z| z) {
                return CircuitClass::Unclassified;
            }
            if halves.is_empty() && !circles[0].intersection(circles[1]).is_empty() {
                return CircuitClass::Unclassified;
            }
            let rest = EdgeSubset::from_bits(links.bits() & !covered.bits());
            let joined = if rest.is_empty() {
                figure_a.intersection(figure_b).len() == 1
            } else {
                figure_a.intersection(figure_b).is_empty() && is_connecting_path(phi, rest, figure_a, figure_b)
            };
            if joined {
                CircuitClass::JoinedFigures
            } else {
                CircuitClass::Unclassified
            }
        }
        _ => CircuitClass::Unclassified,
    }
}

/// Ranks of every edge subset, indexed by bitmask.
pub fn rank_table(phi: &GainGraph) -> Vec<u8> {
    assert!(phi.edge_count() < 32, "rank table limited to 31 edges");
    (0..1u64 << phi.edge_count()).map(|mask| phi.rank(EdgeSubset::from_bits(mask)) as u8).collect()
}

/// Every circuit of the frame matroid, in increasing bitmask order.
pub fn circuits(phi: &GainGraph) -> Result<Vec<EdgeSubset>> {
    if phi.edge_count() > CLASSIFY_CAP {
        return Err(Error::EdgeCapExceeded { edges: phi.edge_count(), cap: CLASSIFY_CAP });
    }
    let ranks = rank_table(phi);
    Ok((1..1u64 << phi.edge_count())
        .map(EdgeSubset::from_bits)
        .filter(|s| {
            let size = s.len();
            (ranks[s.bits() as usize] as usize) < size
                && s.iter().all(|e| ranks[s.without(e).bits() as usize] as usize == size - 1)
        })
        .collect())
}

/// Counts of each circuit class over all circuits of `phi`.
pub fn circuit_census(phi: &GainGraph) -> Result<BTreeMap<CircuitClass, usize>> {
    let mut census = BTreeMap::new();
    for c in circuits(phi)? {
        *census.entry(classify_shape(phi, c)).or_insert(0) += 1;
    }
    Ok(census)
}

/// Checks normalization, unit increase, monotonicity and submodularity of
/// the rank function over every pair of subsets.
pub fn check_rank_axioms(phi: &GainGraph) -> std::result::Result<(), String> {
    let ranks = rank_table(phi);
    let m = phi.edge_count();
    if ranks[0] != 0 {
        return Err("rank of the empty set is not zero".into());
    }
    for s in 0..1u64 << m {
        for e in 0..m {
            if s >> e & 1 == 0 {
                let (a, b) = (ranks[s as usize], ranks[(s | 1 << e) as usize]);
                if b < a || b > a + 1 {
                    return Err(format!("adding edge {e} to {s:#b} changes rank {a} -> {b}"));
                }
            }
        }
    }
    for s in 0..1u64 << m {
        for t in s..1u64 << m {
            let lhs = ranks[s as usize] as u32 + ranks[t as usize] as u32;
            let rhs = ranks[(s | t) as usize] as u32 + ranks[(s & t) as usize] as u32;
            if lhs < rhs {
                return Err(format!("submodularity fails for {s:#b}, {t:#b}"));
            }
        }
    }
    Ok(())
}

/// Random spot checks of the rank axioms on larger gain graphs.
pub fn spot_check_rank_axioms<R: Rng>(phi: &GainGraph, rng: &mut R, samples: usize) -> std::result::Result<(), String> {
    let m = phi.edge_count();
    let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if phi.rank(EdgeSubset::EMPTY) != 0 {
        return Err("rank of the empty set is not zero".into());
    }
    for _ in 0..samples {
        let s = EdgeSubset::from_bits(rng.gen::<u64>() & mask);
        let t = EdgeSubset::from_bits(rng.gen::<u64>() & mask);
        let (rs, rt) = (phi.rank(s), phi.rank(t));
        if rs > s.len() {
            return Err(format!("rank of {:#b} exceeds its size", s.bits()));
        }
        if rs + rt < phi.rank(s.union(t)) + phi.rank(s.intersection(t)) {
            return Err(format!("submodularity fails for {:#b}, {:#b}", s.bits(), t.bits()));
        }
        if s.is_subset(s.union(t)) && rs > phi.rank(s.union(t)) {
            return Err(format!("monotonicity fails for {:#b}", s.bits()));
        }
        if m > 0 {
            let e = rng.gen_range(0..m);
            let grown = phi.rank(s.with(e));
            if grown < rs || grown > rs + 1 {
                return Err(format!("adding edge {e} to {:#b} changes rank by more than one", s.bits()));
            }
        }
    }
    Ok(())
}

/// Which vertex sets `X` to use for each graph.
#[derive(Clone, Debug)]
pub enum HalfEdgeChoice {
    /// Every subset of the vertices.
    All,
    /// The listed sets, for graphs with enough vertices.
    Only(Vec<VertexSet>),
}

/// A family of instances `(Γ, X, 𝔊)` for [`cross_check`].
#[derive(Clone, Debug)]
pub struct CheckFamily {
    pub graphs: Vec<SimpleGraph>,
    pub half_edges: HalfEdgeChoice,
    pub groups: Vec<FiniteGroup>,
    pub edge_cap: usize,
}

impl CheckFamily {
    /// Every labeled simple graph with `1..=max_n` vertices, all `X`, and
    /// the cyclic group of each listed order.
    pub fn exhaustive(max_n: usize, gammas: &[usize], edge_cap: usize) -> Result<Self> {
        let groups = gammas
            .iter()
            .map(|&m| FiniteGroup::cyclic(m))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CheckFamily {
            graphs: (1..=max_n).flat_map(SimpleGraph::all_labeled).collect(),
            half_edges: HalfEdgeChoice::All,
            groups,
            edge_cap,
        })
    }

    fn pairs(&self) -> Vec<(SimpleGraph, VertexSet)> {
        self.graphs
            .iter()
            .flat_map(|g| {
                let xs: Vec<VertexSet> = match &self.half_edges {
                    HalfEdgeChoice::All => (0..1u32 << g.n()).map(VertexSet::from_bits).collect(),
                    HalfEdgeChoice::Only(list) => list.iter().copied().filter(|x| x.is_subset(g.vertices())).collect(),
                };
                xs.into_iter().map(move |x| (g.clone(), x))
            })
            .collect()
    }
}

/// One side of a disagreement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteValue {
    pub route: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub graph: SimpleGraph,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    /// Group order, absent for the symbolic comparison.
    pub gamma: Option<usize>,
    pub route_a: RouteValue,
    pub route_b: RouteValue,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub instances: usize,
    pub passed: usize,
    /// Instances whose expansion exceeded the edge cap; only the symbolic
    /// routes were compared for them.
    pub skipped: usize,
    pub failures: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn whitney_bivariate(engine: &mut WhitneyEngine, g: &SimpleGraph, x: VertexSet) -> Result<BivariatePolynomial> {
    let rows = (0..=g.n()).map(|i| engine.partial(g, x, i)).collect::<Result<Vec<_>>>()?;
    BivariatePolynomial::from_rows(g.n(), rows)
}

struct PairOutcome {
    instances: usize,
    passed: usize,
    skipped: usize,
    failures: Vec<Mismatch>,
}

fn check_pair(engine: &mut WhitneyEngine, family: &CheckFamily, g: &SimpleGraph, x: VertexSet) -> Result<PairOutcome> {
    let n = g.n();
    let mismatch = |gamma: Option<usize>, a: (&str, String), b: (&str, String)| Mismatch {
        graph: g.clone(),
        x: x.labels(),
        gamma,
        route_a: RouteValue { route: a.0.into(), value: a.1 },
        route_b: RouteValue { route: b.0.into(), value: b.1 },
    };
    let formula = whitney_bivariate(engine, g, x)?;
    let bivariate = chromatic_partial_with(g, x, engine.chromatic_cache());
    let mut failures = Vec::new();
    let symbolic_ok = formula == bivariate;
    if !symbolic_ok {
        failures.push(mismatch(None, ("formula", formula.to_string()), ("bivariate", bivariate.to_string())));
    }
    let mut outcome = PairOutcome { instances: 0, passed: 0, skipped: 0, failures: Vec::new() };
    let mut by_order: BTreeMap<usize, IntPolynomial> = BTreeMap::new();
    for group in &family.groups {
        outcome.instances += 1;
        let gamma = group.order();
        let phi = GainGraph::expand(g, x, group);
        if phi.edge_count() > family.edge_cap {
            outcome.skipped += 1;
            continue;
        }
        let before = failures.len();
        let expected = formula.specialize(&BigInt::from(gamma));
        let brute = chromatic_subset_expansion(&phi, &SweepOptions::with_cap(family.edge_cap))?.signless(n);
        let ranks = chromatic_from_ranks(&phi, family.edge_cap)?.signless(n);
        if brute != expected {
            failures.push(mismatch(Some(gamma), ("formula", expected.to_string()), ("subset_expansion", brute.to_string())));
        }
        if ranks != expected {
            failures.push(mismatch(Some(gamma), ("formula", expected.to_string()), ("matroid_rank", ranks.to_string())));
        }
        match by_order.get(&gamma) {
            Some(other) if *other != brute => failures.push(mismatch(
                Some(gamma),
                ("subset_expansion", other.to_string()),
                ("subset_expansion_other_group", brute.to_string()),
            )),
            Some(_) => {}
            None => {
                by_order.insert(gamma, brute);
            }
        }
        if symbolic_ok && failures.len() == before {
            outcome.passed += 1;
        }
    }
    outcome.failures = failures;
    Ok(outcome)
}

/// Runs every instance of the family through the stable-set formula, the
/// bivariate chromatic polynomial, subset enumeration over the gain graph,
/// and the rank-based characteristic polynomial, and reports disagreements.
pub fn cross_check(family: &CheckFamily) -> Result<CrossCheckReport> {
    let outcomes = family
        .pairs()
        .into_par_iter()
        .map_init(WhitneyEngine::new, |engine, (g, x)| check_pair(engine, family, &g, x))
        .collect::<Result<Vec<_>>>()?;
    let mut report = CrossCheckReport::default();
    for o in outcomes {
        report.instances += o.instances;
        report.passed += o.passed;
        report.skipped += o.skipped;
        report.failures.extend(o.failures);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> SimpleGraph {
        parse_graph(s).unwrap()
    }

    #[test]
    fn characteristic_examples() {
        let p2 = g("P2");
        let t = FiniteGroup::trivial();
        let (p, b) = characteristic_from_ranks(&GainGraph::expand(&p2, VertexSet::EMPTY, &t), 22).unwrap();
        assert_eq!((p, b), (IntPolynomial::from_i64s(&[1, -2, 1]), 1));
        let (p, b) = characteristic_from_ranks(&GainGraph::expand(&p2, VertexSet::from_indices([0]), &t), 22).unwrap();
        assert_eq!((p, b), (IntPolynomial::from_i64s(&[-1, 3, -3, 1]), 0));
        let (p, _) = characteristic_from_ranks(&GainGraph::expand(&p2, p2.vertices(), &t), 22).unwrap();
        assert_eq!(p.signless(3), IntPolynomial::from_i64s(&[4, 8, 5, 1]));
    }

    #[test]
    fn classification_examples() {
        let k2 = g("K2");
        let z2 = GainGraph::expand(&k2, VertexSet::EMPTY, &FiniteGroup::cyclic(2).unwrap());
        // two links with different gains form a non-neutral digon: independent
        assert_eq!(classify_circuit(&z2, EdgeSubset::from_indices([0, 1])).unwrap(), CircuitClass::NotACircuit);
        let doubled = GainGraph::expand(&k2, VertexSet::EMPTY, &FiniteGroup::trivial());
        assert_eq!(doubled.edge_count(), 1);
        let handcuff = GainGraph::expand(&k2, k2.vertices(), &FiniteGroup::trivial());
        assert_eq!(classify_circuit(&handcuff, handcuff.all_edges()).unwrap(), CircuitClass::JoinedFigures);
        let z3 = GainGraph::expand(&k2, VertexSet::EMPTY, &FiniteGroup::cyclic(3).unwrap());
        assert_eq!(classify_circuit(&z3, z3.all_edges()).unwrap(), CircuitClass::UnbalancedTheta);
        let k3 = g("K3");
        let tri = GainGraph::expand(&k3, VertexSet::EMPTY, &FiniteGroup::trivial());
        assert_eq!(classify_circuit(&tri, tri.all_edges()).unwrap(), CircuitClass::NeutralCircle);
    }

    #[test]
    fn balance_survives_reorientation() {
        let k3 = g("K3");
        let phi = GainGraph::expand(&k3, VertexSet::from_indices([1]), &FiniteGroup::symmetric(3).unwrap());
        let flipped = phi.reoriented();
        for mask in 0..1u64 << phi.edge_count() {
            let s = EdgeSubset::from_bits(mask);
            assert_eq!(phi.balanced_components(s), flipped.balanced_components(s));
        }
    }

    #[test]
    fn rank_axioms_small() {
        let p2 = g("P2");
        let phi = GainGraph::expand(&p2, VertexSet::from_indices([0]), &FiniteGroup::cyclic(2).unwrap());
        check_rank_axioms(&phi).unwrap();
    }

    #[test]
    fn table_family_passes() {
        let p2 = g("P2");
        let xs = ["none", "1", "2", "1,2", "1,3", "all"]
            .iter()
            .map(|s| VertexSet::parse(s, 3).unwrap())
            .collect();
        let family = CheckFamily {
            graphs: vec![p2],
            half_edges: HalfEdgeChoice::Only(xs),
            groups: (1..=3).map(|m| FiniteGroup::cyclic(m).unwrap()).collect(),
            edge_cap: 22,
        };
        let report = cross_check(&family).unwrap();
        assert_eq!((report.instances, report.passed, report.skipped), (18, 18, 0));
        assert!(report.ok());
    }
}
