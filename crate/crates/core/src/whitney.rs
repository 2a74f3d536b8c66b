//! Whitney numbers of the first kind for graphs and their group expansions.
//!
//! Signless Whitney numbers `w̄_i` of an expansion are indexed against
//! `λ^{n-i}` of its chromatic polynomial. The number `w̄_i(𝔊·Γ^(X))` is a
//! polynomial in the group order γ; this module evaluates it from the
//! base graph alone:
//!
//! ```text
//! w̄_i = Σ_{j ≤ i} γ^j Σ_{k ≤ i-j} (-1)^k C(n-j-k, n-i) Σ_{Y ⊆ X^c stable, |Y| = k} w̄_j(Γ∖Y)
//! ```
//!
//! together with the full-expansion special case, closed forms for low
//! indices and special coefficients, and the Dowling (complete graph) case.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chromatic::ChromaticCache;
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexSet};
use crate::poly::{binom, binom_generalized, GammaPolynomial, IntPolynomial};

/// Signless Whitney numbers `w̄_0, …, w̄_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WhitneyVector(Vec<BigInt>);

impl WhitneyVector {
    /// Reads the numbers off a chromatic polynomial of degree `n`.
    pub fn from_chromatic(chi: &IntPolynomial, n: usize) -> Self {
        let signless = chi.signless(n);
        WhitneyVector((0..=n).map(|i| signless.coeff(n - i)).collect())
    }

    pub fn from_values(values: Vec<BigInt>) -> Self {
        WhitneyVector(values)
    }

    /// `w̄_i`, zero past the end.
    pub fn get(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index with a nonzero entry.
    pub fn rank(&self) -> Option<usize> {
        self.0.iter().rposition(|w| !w.is_zero())
    }
}

/// Signless Stirling numbers of the first kind, `s̄(n, k)`, by the
/// recurrence `s̄(n, k) = s̄(n-1, k-1) + (n-1)·s̄(n-1, k)`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows = vec![vec![BigInt::one()]];
        for n in 1..=max_n {
            let prev: &Vec<BigInt> = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    let down = if k > 0 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::zero() };
                    let stay = prev.get(k).cloned().unwrap_or_default() * BigInt::from(n - 1);
                    down + stay
                })
                .collect();
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `s̄(n, k)`; zero when `k < 0` or `k > n`.
    pub fn get(&self, n: usize, k: i64) -> BigInt {
        assert!(n <= self.max_n(), "Stirling table built only up to n = {}", self.max_n());
        if k < 0 {
            return BigInt::zero();
        }
        self.rows[n].get(k as usize).cloned().unwrap_or_default()
    }
}

/// Coefficients from the formula for one index, with the leading term
/// predicted from the base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialCoefficients {
    /// Value at γ = 0.
    pub constant: BigInt,
    /// Coefficient of `γ^{i-1}`, defined for `1 <= i <= n - c`.
    pub subleading: Option<BigInt>,
    /// `(degree, coefficient)` of the top term, `None` when `w̄_i` vanishes.
    pub leading: Option<(usize, BigInt)>,
}

/// Caches base-graph chromatic polynomials and Whitney vectors of the
/// induced subgraphs visited by the stable-set sums.
#[derive(Default, Debug)]
pub struct WhitneyEngine {
    chromatic: ChromaticCache,
    vectors: HashMap<SimpleGraph, WhitneyVector>,
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i > n {
        Err(Error::IndexOutOfRange { index: i, max: n })
    } else {
        Ok(())
    }
}

fn check_nonempty(g: &SimpleGraph) -> Result<()> {
    if g.n() == 0 {
        Err(Error::Precondition("the base graph needs at least one vertex".into()))
    } else {
        Ok(())
    }
}

impl WhitneyEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn chromatic_cache(&mut self) -> &mut ChromaticCache {
        &mut self.chromatic
    }

    /// `w̄_0(Γ), …, w̄_n(Γ)`.
    pub fn graph(&mut self, g: &SimpleGraph) -> WhitneyVector {
        if let Some(w) = self.vectors.get(g) {
            return w.clone();
        }
        let w = WhitneyVector::from_chromatic(&self.chromatic.chromatic(g), g.n());
        self.vectors.insert(g.clone(), w.clone());
        w
    }

    /// `w̄_i(𝔊·Γ^(V)) = Σ_{j ≤ i} w̄_j(Γ) C(n-j, i-j) γ^j`.
    pub fn full(&mut self, g: &SimpleGraph, i: usize) -> Result<GammaPolynomial> {
        check_nonempty(g)?;
        check_index(i, g.n())?;
        let n = g.n() as i64;
        let w = self.graph(g);
        Ok(GammaPolynomial::from_coeffs(
            (0..=i).map(|j| w.get(j) * binom(n - j as i64, (i - j) as i64)).collect(),
        ))
    }

    /// `w̄_i(𝔊·Γ^(X))` from the stable-set formula.
    pub fn partial(&mut self, g: &SimpleGraph, x: VertexSet, i: usize) -> Result<GammaPolynomial> {
        check_nonempty(g)?;
        check_index(i, g.n())?;
        let n = g.n() as i64;
        let i64_i = i as i64;
        let mut coeffs = vec![BigInt::zero(); i + 1];
        for y in g.stable_sets(x.complement(g.n()), i) {
            let k = y.len();
            let w = self.graph(&g.delete_vertices(y).graph);
            for (j, c) in coeffs.iter_mut().enumerate().take(i - k + 1) {
                let wj = w.get(j);
                if wj.is_zero() {
                    continue;
                }
                let term = binom(n - (j + k) as i64, n - i64_i) * wj;
                if k % 2 == 0 {
                    *c += term;
                } else {
                    *c -= term;
                }
            }
        }
        Ok(GammaPolynomial::from_coeffs(coeffs))
    }

    /// `w̄_0, w̄_1, w̄_2` from the closed forms in the base graph statistics.
    pub fn lower(&mut self, g: &SimpleGraph, x: VertexSet) -> Result<[GammaPolynomial; 3]> {
        check_nonempty(g)?;
        let s = g.stats(x);
        let (n, e, xs) = (s.n as i64, s.edge_count as i64, s.x_size as i64);
        let w1 = GammaPolynomial::from_i64s(&[xs, e]);
        let quadratic = e * (e - 1) / 2 - s.triangles as i64;
        let linear = (xs - 1) * e + s.degree_sum_outside as i64;
        // (n-1)(|X| - n/2) + |E(Γ^c∖X)|, doubled to stay in integers
        let doubled = (n - 1) * (2 * xs - n) + 2 * s.complement_edges_outside as i64;
        assert!(doubled % 2 == 0, "constant term of w̄_2 must be an integer");
        let w2 = GammaPolynomial::from_i64s(&[doubled / 2, linear, quadratic]);
        Ok([GammaPolynomial::one(), w1, w2])
    }

    /// Constant, subleading and leading coefficients from their closed forms.
    pub fn special(&mut self, g: &SimpleGraph, x: VertexSet, i: usize) -> Result<SpecialCoefficients> {
        check_nonempty(g)?;
        check_index(i, g.n())?;
        let constant = self.constant_term(g, x, i);
        let subleading = self.subleading(g, x, i).ok();
        let leading = self.leading_term(g, x, i);
        Ok(SpecialCoefficients { constant, subleading, leading })
    }

    /// `Σ_k (-1)^k C(n-k, i-k) α_k(Γ∖X)`.
    pub fn constant_term(&mut self, g: &SimpleGraph, x: VertexSet, i: usize) -> BigInt {
        let n = g.n() as i64;
        let rest = g.delete_vertices(x.intersection(g.vertices())).graph;
        (0..=i)
            .map(|k| {
                let term = binom(n - k as i64, (i - k) as i64) * BigInt::from(rest.alpha(k));
                if k % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    /// `(n+1-i)·w̄_{i-1}(Γ) - Σ_{y ∉ X} w̄_{i-1}(Γ∖y)`, for `1 <= i <= n - c`.
    pub fn subleading(&mut self, g: &SimpleGraph, x: VertexSet, i: usize) -> Result<BigInt> {
        let (n, c) = (g.n(), g.component_count());
        if i == 0 || i > n - c {
            return Err(Error::Precondition(format!("subleading coefficient needs 1 <= i <= n - c = {}", n - c)));
        }
        let base = self.graph(g).get(i - 1) * BigInt::from(n + 1 - i);
        let removed: BigInt = x
            .complement(n)
            .iter()
            .map(|y| self.graph(&g.delete_vertices(VertexSet::singleton(y)).graph).get(i - 1))
            .sum();
        Ok(base - removed)
    }

    /// Predicted top term: `w̄_i(Γ)·γ^i` for `i <= n - c`,
    /// `w̄_{n-c}(Γ)·C(c-ζ, i-(n-c))·γ^{n-c}` up to `n - ζ`, none beyond.
    pub fn leading_term(&mut self, g: &SimpleGraph, x: VertexSet, i: usize) -> Option<(usize, BigInt)> {
        let (n, c, zeta) = (g.n(), g.component_count(), g.zeta(x));
        let w = self.graph(g);
        if i <= n - c {
            Some((i, w.get(i)))
        } else if i <= n - zeta {
            Some((n - c, w.get(n - c) * binom((c - zeta) as i64, (i - (n - c)) as i64)))
        } else {
            None
        }
    }
}

/// Signless Whitney numbers of a simple graph.
pub fn whitney_graph(g: &SimpleGraph) -> WhitneyVector {
    WhitneyEngine::new().graph(g)
}

pub fn whitney_full(g: &SimpleGraph, i: usize) -> Result<GammaPolynomial> {
    WhitneyEngine::new().full(g, i)
}

pub fn whitney_partial(g: &SimpleGraph, x: VertexSet, i: usize) -> Result<GammaPolynomial> {
    WhitneyEngine::new().partial(g, x, i)
}

pub fn lower_whitney(g: &SimpleGraph, x: VertexSet) -> Result<[GammaPolynomial; 3]> {
    WhitneyEngine::new().lower(g, x)
}

pub fn special_coefficients(g: &SimpleGraph, x: VertexSet, i: usize) -> Result<SpecialCoefficients> {
    WhitneyEngine::new().special(g, x, i)
}

/// Whitney numbers of the Dowling lattice of rank `n`:
/// `Σ_j s̄(n, n-j) C(n-j, i-j) γ^j`.
pub fn dowling_whitney(n: usize, i: usize) -> Result<GammaPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("Dowling lattices need n >= 1".into()));
    }
    check_index(i, n)?;
    let s = StirlingTable::new(n);
    let (n64, i64_) = (n as i64, i as i64);
    Ok(GammaPolynomial::from_coeffs(
        (0..=i64_).map(|j| s.get(n, n64 - j) * binom(n64 - j, i64_ - j)).collect(),
    ))
}

/// `w̄_i(𝔊·K_n^(X))` with `missing = |X^c|` joints absent:
/// `Σ_j [s̄(n,n-j) C(n-j,i-j) - missing·s̄(n-1,n-j-1) C(n-j-1,i-j-1)] γ^j`.
pub fn jointless_dowling_whitney(n: usize, missing: usize, i: usize) -> Result<GammaPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("Dowling lattices need n >= 1".into()));
    }
    check_index(i, n)?;
    if missing > n {
        return Err(Error::Precondition(format!("at most {n} joints can be missing")));
    }
    let s = StirlingTable::new(n);
    Ok(GammaPolynomial::from_coeffs(stirling_bracket(&s, n, missing, i)))
}

fn stirling_bracket(s: &StirlingTable, n: usize, missing: usize, i: usize) -> Vec<BigInt> {
    let (n, i) = (n as i64, i as i64);
    (0..=i)
        .map(|j| {
            s.get(n as usize, n - j) * binom(n - j, i - j)
                - BigInt::from(missing) * s.get(n as usize - 1, n - j - 1) * binom(n - j - 1, i - j - 1)
        })
        .collect()
}

/// Checks `Σ_j [s̄(n,n-j)C(n-j,i-j) - n·s̄(n-1,n-j-1)C(n-j-1,i-j-1)] = s̄(n,n-i)`,
/// and that the stable-set formula for `K_n` with no joints gives the same
/// polynomial as the Stirling form and evaluates to `s̄(n, n-i)` at γ = 1.
pub fn check_stirling_identity(n: usize, i: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("the Stirling identity needs n >= 1".into()));
    }
    check_index(i, n)?;
    let s = StirlingTable::new(n);
    let expected = s.get(n, (n - i) as i64);
    let bracket = stirling_bracket(&s, n, n, i);
    let sum: BigInt = bracket.iter().sum();
    let kn = SimpleGraph::complete(n);
    let formula = whitney_partial(&kn, VertexSet::EMPTY, i)?;
    Ok(sum == expected
        && formula == GammaPolynomial::from_coeffs(bracket)
        && formula.eval(&BigInt::one()) == expected)
}

/// Checks `Σ_{k ≤ m} (-1)^k C(ζ,k) C(c-k, c-m) = C(c-ζ, m)` for
/// `c >= m >= 0`, `0 <= ζ <= c`, along with the intermediate forms through
/// the negative-upper-index binomial.
pub fn check_vandermonde(c: usize, zeta: usize, m: usize) -> Result<bool> {
    if m > c || zeta > c {
        return Err(Error::Precondition(format!("need c >= m and c >= ζ, got c={c}, ζ={zeta}, m={m}")));
    }
    let (c, zeta, m) = (c as i64, zeta as i64, m as i64);
    let sign = |k: i64| if k.is_even() { BigInt::one() } else { -BigInt::one() };
    let lhs: BigInt = (0..=m).map(|k| sign(k) * binom(zeta, k) * binom(c - k, c - m)).sum();
    let rhs = binom(c - zeta, m);
    let negated: BigInt = (0..=m)
        .map(|k| binom(zeta, k) * binom_generalized(-(c - m + 1), m - k))
        .sum::<BigInt>()
        * sign(m);
    let convolved = sign(m) * binom_generalized(zeta - c + m - 1, m);
    debug_assert!(!rhs.is_negative());
    Ok(lhs == rhs && negated == rhs && convolved == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> SimpleGraph {
        parse_graph(s).unwrap()
    }

    fn gam(c: &[i64]) -> GammaPolynomial {
        GammaPolynomial::from_i64s(c)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn graph_vectors() {
        assert_eq!(whitney_graph(&g("P2")).values(), ints(&[1, 2, 1, 0]).as_slice());
        let s = StirlingTable::new(5);
        let k5 = whitney_graph(&g("K5"));
        for i in 0..=5 {
            assert_eq!(k5.get(i), s.get(5, 5 - i as i64));
        }
        assert_eq!(whitney_graph(&g("E3")).values(), ints(&[1, 0, 0, 0]).as_slice());
        assert_eq!(whitney_graph(&g("E3")).rank(), Some(0));
    }

    #[test]
    fn stirling_table() {
        let s = StirlingTable::new(4);
        assert_eq!(s.get(0, 0), BigInt::one());
        assert_eq!(s.get(4, 0), BigInt::zero());
        assert_eq!(s.get(4, 2), BigInt::from(11));
        assert_eq!(s.get(3, -1), BigInt::zero());
        assert_eq!(s.get(3, 4), BigInt::zero());
    }

    #[test]
    fn full_examples() {
        assert_eq!(whitney_full(&g("P2"), 1).unwrap(), gam(&[3, 2]));
        assert_eq!(whitney_full(&g("K3"), 2).unwrap(), gam(&[3, 6, 2]));
        assert_eq!(whitney_full(&g("C4"), 0).unwrap(), gam(&[1]));
        assert_eq!(whitney_full(&g("P2"), 4), Err(Error::IndexOutOfRange { index: 4, max: 3 }));
    }

    #[test]
    fn partial_examples() {
        let p2 = g("P2");
        assert_eq!(whitney_partial(&p2, VertexSet::from_indices([1]), 2).unwrap(), gam(&[0, 2, 1]));
        assert_eq!(whitney_partial(&p2, VertexSet::EMPTY, 3).unwrap(), gam(&[-1, 0, 1]));
        assert_eq!(whitney_partial(&p2, VertexSet::from_indices([0, 2]), 3).unwrap(), gam(&[0, 2, 1]));
        // isolated vertex outside X kills the top index
        assert!(whitney_partial(&g("E2"), VertexSet::from_indices([0]), 2).unwrap().is_zero());
    }

    #[test]
    fn lower_examples() {
        let p2 = g("P2");
        let [w0, w1, w2] = lower_whitney(&p2, p2.vertices()).unwrap();
        assert_eq!((w0, w1, w2), (gam(&[1]), gam(&[3, 2]), gam(&[3, 4, 1])));
        assert_eq!(lower_whitney(&p2, VertexSet::EMPTY).unwrap()[2], gam(&[-2, 2, 1]));
        let k3 = g("K3");
        assert_eq!(lower_whitney(&k3, k3.vertices()).unwrap()[2], gam(&[3, 6, 2]));
    }

    #[test]
    fn special_examples() {
        let k3 = g("K3");
        let sc = special_coefficients(&k3, VertexSet::from_indices([0]), 3).unwrap();
        assert_eq!(sc.constant, BigInt::from(-1));
        let p2 = g("P2");
        let sc = special_coefficients(&p2, p2.vertices(), 2).unwrap();
        assert_eq!(sc.subleading, Some(BigInt::from(4)));
        let sc = special_coefficients(&p2, VertexSet::EMPTY, 3).unwrap();
        assert_eq!(sc.leading, Some((2, BigInt::one())));
        assert_eq!(sc.subleading, None);
        let mut engine = WhitneyEngine::new();
        assert!(matches!(engine.subleading(&p2, VertexSet::EMPTY, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn dowling_examples() {
        assert_eq!(dowling_whitney(2, 1).unwrap(), gam(&[2, 1]));
        assert_eq!(dowling_whitney(3, 1).unwrap(), gam(&[3, 3]));
        assert_eq!(dowling_whitney(6, 0).unwrap(), gam(&[1]));
        assert!(dowling_whitney(0, 0).is_err());
    }

    #[test]
    fn jointless_matches_stable_set_formula() {
        let k4 = g("K4");
        for bits in 0..16u32 {
            let x = VertexSet::from_bits(bits);
            for i in 0..=4 {
                assert_eq!(
                    jointless_dowling_whitney(4, 4 - x.len(), i).unwrap(),
                    whitney_partial(&k4, x, i).unwrap()
                );
            }
        }
    }

    #[test]
    fn stirling_identity_examples() {
        assert!(check_stirling_identity(3, 2).unwrap());
        assert!(check_stirling_identity(1, 0).unwrap());
        assert!(check_stirling_identity(8, 5).unwrap());
    }

    #[test]
    fn vandermonde_examples() {
        assert!(check_vandermonde(3, 1, 2).unwrap());
        assert!(check_vandermonde(4, 2, 0).unwrap());
        assert!(check_vandermonde(5, 5, 3).unwrap());
        assert_eq!(binom(0, 3), BigInt::zero());
        assert!(check_vandermonde(2, 3, 1).is_err());
        assert!(check_vandermonde(2, 1, 3).is_err());
    }
}
