//! Exact-integer polynomials in λ, in γ, and in both.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Marker for the indeterminate of a [`Poly`].
pub trait Variable: Copy + Clone + Default + fmt::Debug + PartialEq + Eq + Hash + 'static {
    /// Name used in JSON.
    const NAME: &'static str;
    /// Symbol used in text output.
    const SYMBOL: &'static str;
    /// Whether text output lists the highest power first.
    const DESCENDING: bool;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Lambda;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gamma;

impl Variable for Lambda {
    const NAME: &'static str = "lambda";
    const SYMBOL: &'static str = "λ";
    const DESCENDING: bool = true;
}

impl Variable for Gamma {
    const NAME: &'static str = "gamma";
    const SYMBOL: &'static str = "g";
    const DESCENDING: bool = false;
}

/// Dense polynomial with arbitrary-precision integer coefficients in
/// ascending order. The highest stored coefficient is never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<V> {
    coeffs: Vec<BigInt>,
    var: PhantomData<V>,
}

/// Polynomial in λ.
pub type IntPolynomial = Poly<Lambda>;
/// Polynomial in the group order γ.
pub type GammaPolynomial = Poly<Gamma>;

impl<V: Variable> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> Poly<V> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new(), var: PhantomData }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::monomial(1, 1)
    }

    /// `c·x^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs, var: PhantomData }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ascending coefficients, empty for the zero polynomial.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    pub fn pow(&self, exp: usize) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Divides by `x^k`, or `None` if `x^k` does not divide.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// `(-1)^n · p(-x)`: flips the sign of every coefficient whose power
    /// differs from `n` in parity.
    pub fn signless(&self, n: usize) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if (n + k).is_multiple_of(2) { c.clone() } else { -c })
                .collect(),
        )
    }

    pub fn with_var<W: Variable>(&self) -> Poly<W> {
        Poly::from_coeffs(self.coeffs.clone())
    }
}

impl<V: Variable> Add for &Poly<V> {
    type Output = Poly<V>;

    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<V: Variable> Sub for &Poly<V> {
    type Output = Poly<V>;

    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<V: Variable> Mul for &Poly<V> {
    type Output = Poly<V>;

    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<V: Variable> Neg for &Poly<V> {
    type Output = Poly<V>;

    fn neg(self) -> Poly<V> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl<V: Variable> $tr for Poly<V> {
            type Output = Poly<V>;
            fn $method(self, rhs: Poly<V>) -> Poly<V> {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl<V: Variable> Neg for Poly<V> {
    type Output = Poly<V>;

    fn neg(self) -> Poly<V> {
        -&self
    }
}

impl<V: Variable> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut powers: Vec<usize> = (0..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).collect();
        if V::DESCENDING {
            powers.reverse();
        }
        for (idx, &k) in powers.iter().enumerate() {
            let c = &self.coeffs[k];
            let sign = if c.is_negative() { "-" } else { "+" };
            match (idx, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let magnitude = c.abs();
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}")?;
                    }
                    write!(f, "{}", V::SYMBOL)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Largest magnitude emitted as a bare JSON number.
const JSON_SAFE: i64 = 1 << 53;

/// Exact integer as a JSON number when within 53 bits, otherwise as a
/// decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= JSON_SAFE => serializer.serialize_i64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Text(s) => s.parse().map(JsonInt).map_err(D::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    var: String,
    coeffs: Vec<JsonInt>,
}

impl<V: Variable> Serialize for Poly<V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            var: V::NAME.to_string(),
            coeffs: self.coeffs.iter().cloned().map(JsonInt).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, V: Variable> Deserialize<'de> for Poly<V> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        if raw.var != V::NAME {
            return Err(D::Error::custom(format!("expected var `{}`, found `{}`", V::NAME, raw.var)));
        }
        Ok(Poly::from_coeffs(raw.coeffs.into_iter().map(|c| c.0).collect()))
    }
}

/// A polynomial in λ and γ, stored as the γ-polynomial coefficient of each
/// `λ^{n-i}` for `i = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BivariateJson", into = "BivariateJson")]
pub struct BivariatePolynomial {
    n: usize,
    rows: Vec<GammaPolynomial>,
}

#[derive(Serialize, Deserialize)]
struct BivariateJson {
    n: usize,
    lambda_coeffs: Vec<GammaPolynomial>,
}

impl TryFrom<BivariateJson> for BivariatePolynomial {
    type Error = Error;

    fn try_from(raw: BivariateJson) -> Result<Self> {
        BivariatePolynomial::from_rows(raw.n, raw.lambda_coeffs)
    }
}

impl From<BivariatePolynomial> for BivariateJson {
    fn from(p: BivariatePolynomial) -> Self {
        BivariateJson { n: p.n, lambda_coeffs: p.rows }
    }
}

impl BivariatePolynomial {
    pub fn zero(n: usize) -> Self {
        BivariatePolynomial { n, rows: vec![GammaPolynomial::zero(); n + 1] }
    }

    /// `rows[i]` is the coefficient of `λ^{n-i}`.
    pub fn from_rows(n: usize, rows: Vec<GammaPolynomial>) -> Result<Self> {
        if rows.len() != n + 1 {
            return Err(Error::Precondition(format!(
                "bivariate polynomial of degree {n} needs {} rows, got {}",
                n + 1,
                rows.len()
            )));
        }
        Ok(BivariatePolynomial { n, rows })
    }

    /// Reads a λ-polynomial as a bivariate one with γ-constant coefficients.
    pub fn from_lambda(p: &IntPolynomial, n: usize) -> Result<Self> {
        if p.degree().is_some_and(|d| d > n) {
            return Err(Error::DegreeMismatch { expected: n, found: p.degree() });
        }
        let rows = (0..=n).map(|i| GammaPolynomial::constant(p.coeff(n - i))).collect();
        Ok(BivariatePolynomial { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[GammaPolynomial] {
        &self.rows
    }

    /// Coefficient of `λ^{n-i}`.
    pub fn row(&self, i: usize) -> &GammaPolynomial {
        &self.rows[i]
    }

    /// Coefficient of `λ^k`.
    pub fn lambda_coeff(&self, k: usize) -> &GammaPolynomial {
        &self.rows[self.n - k]
    }

    pub fn is_monic(&self) -> bool {
        self.rows[0] == GammaPolynomial::one()
    }

    /// Substitutes a value for γ.
    pub fn specialize(&self, gamma: &BigInt) -> IntPolynomial {
        IntPolynomial::from_coeffs((0..=self.n).map(|k| self.lambda_coeff(k).eval(gamma)).collect())
    }

    /// Views a polynomial of λ-degree at most `n` inside a frame of degree
    /// `target >= n`, so its `λ^{n-i}` row becomes row `i + target - n`.
    pub fn reframe(&self, target: usize) -> Self {
        assert!(target >= self.n, "cannot shrink a bivariate frame");
        let mut rows = vec![GammaPolynomial::zero(); target - self.n];
        rows.extend(self.rows.iter().cloned());
        BivariatePolynomial { n: target, rows }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        BivariatePolynomial { n: self.n, rows: self.rows.iter().map(|r| r.scale(factor)).collect() }
    }

    /// Sum in the larger of the two frames.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.n.max(other.n);
        let (a, b) = (self.reframe(n), other.reframe(n));
        BivariatePolynomial { n, rows: a.rows.iter().zip(&b.rows).map(|(x, y)| x + y).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut rows = vec![GammaPolynomial::zero(); n + 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BivariatePolynomial { n, rows }
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let power = self.n - i;
            write!(f, "({row})")?;
            match power {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Binomial coefficient, zero when `k < 0`, `k > n`, or `n < 0`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Binomial coefficient with the falling-factorial extension to negative
/// upper index, `binom(-m, k) = (-1)^k binom(m + k - 1, k)`; zero when `k < 0`.
pub fn binom_generalized(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        return binom(n, k);
    }
    let magnitude = binom(-n + k - 1, k);
    if k % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Direction of the unit shift in the expansion substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitShift {
    /// `γ^n·χ((λ+1)/γ)`, the signless form.
    Plus,
    /// `γ^n·χ((λ-1)/γ)`, the signed form.
    Minus,
}

/// Expands `γ^n·p((λ∓1)/γ) = Σ_k a_k γ^{n-k} (λ∓1)^k` exactly, where
/// `p = Σ_k a_k x^k` has degree `n`.
pub fn expansion_substitute(p: &IntPolynomial, n: usize, shift: UnitShift) -> Result<BivariatePolynomial> {
    if p.degree() != Some(n) {
        return Err(Error::DegreeMismatch { expected: n, found: p.degree() });
    }
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for (k, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // (λ∓1)^k = Σ_t binom(k, t) λ^t (∓1)^{k-t}
        for t in 0..=k {
            let mut term = a * binom(k as i64, t as i64);
            if shift == UnitShift::Minus && (k - t) % 2 == 1 {
                term = -term;
            }
            rows[n - t][n - k] += term;
        }
    }
    Ok(BivariatePolynomial {
        n,
        rows: rows.into_iter().map(GammaPolynomial::from_coeffs).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn gam(c: &[i64]) -> GammaPolynomial {
        GammaPolynomial::from_i64s(c)
    }

    #[test]
    fn arithmetic() {
        let a = lam(&[-1, 1]);
        assert_eq!(&a * &a, lam(&[1, -2, 1]));
        assert_eq!(&a + &IntPolynomial::zero(), a);
        let b = lam(&[-3, 1]);
        assert_eq!(&a * &(&b * &b), lam(&[-9, 15, -7, 1]));
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn signless_examples() {
        assert_eq!(lam(&[0, 1, -2, 1]).signless(3), lam(&[0, 1, 2, 1]));
        assert_eq!(IntPolynomial::monomial(1, 4).signless(4), IntPolynomial::monomial(1, 4));
        let k3 = lam(&[0, 2, -3, 1]);
        assert_eq!(k3.signless(3), lam(&[0, 2, 3, 1]));
        assert_eq!(k3.signless(3).signless(3), k3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(3, -1), BigInt::zero());
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
        assert_eq!(binom_generalized(-1, 3), BigInt::from(-1));
        assert_eq!(binom_generalized(-3, 2), BigInt::from(6));
        assert_eq!(binom_generalized(5, 2), BigInt::from(10));
    }

    #[test]
    fn substitution_of_p2_signed() {
        // χ_{P2} = x(x-1)^2 → (λ-1)(λ-1-γ)^2
        let chi = lam(&[0, 1, -2, 1]);
        let got = expansion_substitute(&chi, 3, UnitShift::Minus).unwrap();
        let l1 = BivariatePolynomial::from_rows(1, vec![gam(&[1]), gam(&[-1])]).unwrap();
        let l1g = BivariatePolynomial::from_rows(1, vec![gam(&[1]), gam(&[-1, -1])]).unwrap();
        assert_eq!(got, l1.mul(&l1g).mul(&l1g));
    }

    #[test]
    fn substitution_of_edgeless() {
        let chi = IntPolynomial::monomial(1, 3);
        let plus = expansion_substitute(&chi, 3, UnitShift::Plus).unwrap();
        assert_eq!(plus.specialize(&BigInt::from(7)), lam(&[1, 3, 3, 1]));
        let minus = expansion_substitute(&chi, 3, UnitShift::Minus).unwrap();
        assert_eq!(minus.specialize(&BigInt::from(7)), lam(&[-1, 3, -3, 1]));
    }

    #[test]
    fn substitution_of_p2_signless_at_two() {
        let chi = lam(&[0, 1, 2, 1]);
        let got = expansion_substitute(&chi, 3, UnitShift::Plus).unwrap();
        assert_eq!(got.specialize(&BigInt::from(2)), lam(&[9, 15, 7, 1]));
        assert!(got.is_monic());
    }

    #[test]
    fn substitution_rejects_wrong_degree() {
        let chi = lam(&[0, 1]);
        assert_eq!(
            expansion_substitute(&chi, 2, UnitShift::Plus),
            Err(Error::DegreeMismatch { expected: 2, found: Some(1) })
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(gam(&[1, 3, 1]).to_string(), "1 + 3g + g^2");
        assert_eq!(gam(&[-2, 2, 1]).to_string(), "-2 + 2g + g^2");
        assert_eq!(gam(&[0, 2, 1]).to_string(), "2g + g^2");
        assert_eq!(gam(&[-1, 0, 1]).to_string(), "-1 + g^2");
        assert_eq!(gam(&[3, -1]).to_string(), "3 - g");
        assert_eq!(GammaPolynomial::zero().to_string(), "0");
        assert_eq!(lam(&[-9, 15, -7, 1]).to_string(), "λ^3 - 7λ^2 + 15λ - 9");
    }

    #[test]
    fn json_large_coefficients_are_strings() {
        let big = BigInt::from(1u64 << 60);
        let p = GammaPolynomial::from_coeffs(vec![BigInt::from(3), big.clone()]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, format!(r#"{{"var":"gamma","coeffs":[3,"{big}"]}}"#));
        let back: GammaPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<IntPolynomial>(&text).is_err());
    }

    #[test]
    fn bivariate_json() {
        let p = expansion_substitute(&lam(&[0, 1, 2, 1]), 3, UnitShift::Plus).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.starts_with(r#"{"n":3,"lambda_coeffs":[{"var":"gamma","coeffs":[1]}"#));
        let back: BivariatePolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn reframe_and_add() {
        let small = BivariatePolynomial::from_lambda(&lam(&[1, 1]), 1).unwrap();
        let framed = small.reframe(3);
        assert_eq!(framed.specialize(&BigInt::from(5)), lam(&[1, 1]));
        let sum = framed.add(&BivariatePolynomial::from_lambda(&lam(&[0, 0, 0, 1]), 3).unwrap());
        assert_eq!(sum.specialize(&BigInt::zero()), lam(&[1, 1, 0, 1]));
    }
}
