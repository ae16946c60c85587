use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponent vector over a variable table.
///
/// Ordered by total degree, then lexicographically by exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn one(nvars: usize) -> Self {
        Self { exponents: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exponents[i] = e;
        m
    }

    /// From signed exponents; `None` if any is negative or too large.
    pub fn from_i64(v: &[i64]) -> Option<Self> {
        v.iter()
            .map(|&x| u32::try_from(x).ok())
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::new(self.exponents.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        other
            .divides(self)
            .then(|| Self::new(self.exponents.iter().zip(&other.exponents).map(|(a, b)| a - b).collect()))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        Self::new(self.exponents.iter().zip(&other.exponents).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.exponents.len()).filter(|&i| self.exponents[i] > 0).collect()
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.exponents.iter().map(|&e| i64::from(e)).collect()
    }

    /// Human-readable form such as `x1^2*y0*y3`; `1` for the unit.
    pub fn display(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&names[i]);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// Sparse polynomial with exact rational coefficients; zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub terms: BTreeMap<Monomial, BigRational>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Sum of monomials with coefficient one each (repeated monomials add up).
    pub fn sum_of(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero();
        for m in monomials {
            p.add_term(m, BigRational::one());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = Self::zero();
        for (m, v) in &self.terms {
            p.add_term(m.clone(), v * c);
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                p.add_term(a.mul(b), ca * cb);
            }
        }
        p
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Componentwise minimum over all term exponents.
    pub fn monomial_gcd(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    /// Exact division of every term by a monomial.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut p = Self::zero();
        for (k, v) in &self.terms {
            p.terms.insert(k.div(m)?, v.clone());
        }
        Some(p)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        // highest terms first for readability
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.display(names);
            if abs.is_one() {
                out.push_str(&mono);
            } else if m.is_one() {
                let _ = write!(out, "{abs}");
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    monomial: Monomial,
    numerator: String,
    denominator: String,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                monomial: m.clone(),
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        let mut p = Polynomial::zero();
        for t in terms {
            let n: BigInt = t.numerator.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.denominator.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            p.add_term(t.monomial, BigRational::new(n, den));
        }
        Ok(p)
    }
}
