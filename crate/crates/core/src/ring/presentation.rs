use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::enumerate::DegreeEnumerator;
use super::grading::{Grading, MultiDegree};
use super::monomial::{Monomial, Polynomial};
use crate::error::{CoxError, Result};

/// Graded ring with defining relations and a chosen leading monomial for
/// each relation.
///
/// Monomials are compared by a weight counting exponents on the leading
/// monomials' supports, then by total degree, then lexicographically. Each
/// leading monomial must be the strict maximum of its relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub grading: Grading,
    pub relations: Vec<Polynomial>,
    pub leading_monomials: Vec<Monomial>,
    order_weights: Vec<u64>,
}

impl RingPresentation {
    pub fn free(grading: Grading) -> Self {
        let n = grading.nvars();
        Self { grading, relations: vec![], leading_monomials: vec![], order_weights: vec![0; n] }
    }

    pub fn new(grading: Grading, relations: Vec<Polynomial>, leading_monomials: Vec<Monomial>) -> Result<Self> {
        if relations.len() != leading_monomials.len() {
            return Err(CoxError::param("one leading monomial per relation required"));
        }
        let mut order_weights = vec![0u64; grading.nvars()];
        for lm in &leading_monomials {
            for i in lm.support() {
                order_weights[i] += 1;
            }
        }
        let pres = Self { grading, relations, leading_monomials, order_weights };
        for (f, lm) in pres.relations.iter().zip(&pres.leading_monomials) {
            if f.monomials().any(|m| m.nvars() != pres.grading.nvars()) {
                return Err(CoxError::param("relation has wrong number of variables"));
            }
            if homogeneous_degree(f, &pres.grading)?.is_none() {
                return Err(CoxError::param("relation is not homogeneous"));
            }
            if !f.coefficient(lm).is_one() {
                return Err(CoxError::param("leading monomial must occur with coefficient one"));
            }
            let key = pres.order_key(lm);
            if f.monomials().any(|m| m != lm && pres.order_key(m) >= key) {
                return Err(CoxError::param("leading monomial is not maximal in its relation"));
            }
        }
        Ok(pres)
    }

    pub fn order_key(&self, m: &Monomial) -> (u64, Monomial) {
        let w = m.exponents.iter().zip(&self.order_weights).map(|(&e, &w)| u64::from(e) * w).sum();
        (w, m.clone())
    }

    pub fn relation_degree(&self, i: usize) -> MultiDegree {
        homogeneous_degree(&self.relations[i], &self.grading)
            .ok()
            .flatten()
            .expect("relations are homogeneous")
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials.iter().any(|lm| lm.divides(m))
    }
}

/// Common degree of all terms; `None` when terms disagree. The zero
/// polynomial has no degree.
pub fn homogeneous_degree(p: &Polynomial, g: &Grading) -> Result<Option<MultiDegree>> {
    let mut deg: Option<MultiDegree> = None;
    for m in p.monomials() {
        let d = g.degree_of(m)?;
        match &deg {
            None => deg = Some(d),
            Some(prev) if *prev != d => return Ok(None),
            _ => {}
        }
    }
    Ok(deg)
}

/// Rewrites every occurrence of a leading monomial using its relation until
/// no term is divisible by one.
pub fn normal_form(p: &Polynomial, pres: &RingPresentation) -> Polynomial {
    let mut work: BTreeMap<(u64, Monomial), BigRational> = BTreeMap::new();
    for (m, c) in &p.terms {
        work.insert(pres.order_key(m), c.clone());
    }
    let mut out = Polynomial::zero();
    while let Some(((_, m), c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        let hit = pres
            .leading_monomials
            .iter()
            .enumerate()
            .find_map(|(i, lm)| m.div(lm).map(|q| (i, q)));
        match hit {
            None => out.add_term(m, c),
            Some((i, q)) => {
                let lm = &pres.leading_monomials[i];
                for (t, tc) in &pres.relations[i].terms {
                    if t == lm {
                        continue;
                    }
                    let key = pres.order_key(&t.mul(&q));
                    let e = work.entry(key).or_insert_with(BigRational::zero);
                    *e -= &c * tc;
                }
            }
        }
    }
    out
}

/// Standard monomials of degree `d` and total degree at most `cap`.
pub fn graded_piece_basis(pres: &RingPresentation, d: &MultiDegree, cap: u64) -> Result<Vec<Monomial>> {
    graded_piece_basis_excluding(pres, d, cap, &[])
}

pub fn graded_piece_basis_excluding(
    pres: &RingPresentation,
    d: &MultiDegree,
    cap: u64,
    excluded: &[usize],
) -> Result<Vec<Monomial>> {
    let e = DegreeEnumerator::new(&pres.grading, &vec![1; pres.grading.nvars()], excluded)?;
    let mut v: Vec<Monomial> = e.enumerate(d, cap).into_iter().filter(|m| pres.is_standard(m)).collect();
    v.sort();
    Ok(v)
}

/// Rational variable weights, all at least one, making every relation
/// weighted-homogeneous. Stored as integers over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationWeights {
    pub numerators: Vec<u64>,
    pub denominator: u64,
    /// Whether every relation is homogeneous for these weights.
    pub exact: bool,
}

impl TruncationWeights {
    /// For each relation, a term below the top total degree gets its gap
    /// spread over a variable private to that term.
    pub fn for_presentation(pres: &RingPresentation) -> Self {
        let n = pres.grading.nvars();
        // weights as (num, den) pairs
        let mut w: Vec<(u64, u64)> = vec![(1, 1); n];
        let mut exact = true;
        for f in &pres.relations {
            let terms: Vec<&Monomial> = f.monomials().collect();
            let top = terms.iter().map(|m| m.total_degree()).max().unwrap_or(0);
            for t in &terms {
                let gap = top - t.total_degree();
                if gap == 0 {
                    continue;
                }
                let private = t.support().into_iter().find(|&v| {
                    terms.iter().all(|o| std::ptr::eq(*o, *t) || o.exponents[v] == 0) && w[v] == (1, 1)
                });
                match private {
                    Some(v) => {
                        let e = u64::from(t.exponents[v]);
                        let (num, den) = (e + gap, e);
                        let g = num.gcd(&den);
                        w[v] = (num / g, den / g);
                    }
                    None => exact = false,
                }
            }
        }
        let denominator = w.iter().fold(1u64, |l, &(_, d)| l.lcm(&d));
        let numerators = w.iter().map(|&(num, den)| num * (denominator / den)).collect();
        Self { numerators, denominator, exact }
    }

    pub fn unit(n: usize) -> Self {
        Self { numerators: vec![1; n], denominator: 1, exact: true }
    }

    /// Weight of a monomial in units of `1 / denominator`.
    pub fn units(&self, m: &Monomial) -> u64 {
        m.exponents.iter().zip(&self.numerators).map(|(&e, &w)| u64::from(e) * w).sum()
    }

    pub fn cap_units(&self, cap: u64) -> u64 {
        cap * self.denominator
    }

    /// Weight of a homogeneous polynomial (its top term).
    pub fn poly_units(&self, p: &Polynomial) -> u64 {
        p.monomials().map(|m| self.units(m)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_singularity, extended_degree_matrix, Family};

    fn d4() -> RingPresentation {
        let g = extended_degree_matrix(&build_singularity(Family::D, 4).unwrap());
        let v = |s: &str| g.var_index(s).unwrap();
        let mono = |pairs: &[(&str, u32)]| {
            let mut m = Monomial::one(g.nvars());
            for &(s, e) in pairs {
                m.exponents[v(s)] = e;
            }
            m
        };
        let lm = mono(&[("y1", 1), ("x1", 2)]);
        let f = Polynomial::sum_of([lm.clone(), mono(&[("y2", 1), ("x2", 2)]), mono(&[("y3", 1), ("x3", 2)])]);
        RingPresentation::new(g, vec![f], vec![lm]).unwrap()
    }

    #[test]
    fn normal_form_d4() {
        let p = d4();
        let lm = p.leading_monomials[0].clone();
        let nf = normal_form(&Polynomial::from_monomial(lm.clone()), &p);
        assert_eq!(nf.display(&p.grading.variables), "-x2^2*y2 - x3^2*y3");
        let sq = normal_form(&Polynomial::from_monomial(lm.pow(2)), &p);
        assert_eq!(sq.display(&p.grading.variables), "x2^4*y2^2 + 2*x2^2*x3^2*y2*y3 + x3^4*y3^2");
        assert_eq!(normal_form(&sq, &p), sq);
    }

    #[test]
    fn piece_basis_d4() {
        let p = d4();
        let b = graded_piece_basis(&p, &p.grading.unit(0), 3).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(graded_piece_basis(&p, &MultiDegree::zero(4), 0).unwrap().len(), 1);
    }

    #[test]
    fn weights_make_relation_homogeneous() {
        let p = d4();
        let w = TruncationWeights::for_presentation(&p);
        assert!(w.exact);
        assert_eq!(w.denominator, 1);
        assert!(w.numerators.iter().all(|&x| x == 1));
    }

    #[test]
    fn rejects_non_maximal_leading_term() {
        let p = d4();
        let f = p.relations[0].clone();
        let other = f.monomials().find(|m| **m != p.leading_monomials[0]).unwrap().clone();
        let bad = RingPresentation::new(p.grading.clone(), vec![f.clone()], vec![p.leading_monomials[0].pow(2)]);
        assert!(bad.is_err());
        // any single term can lead since the weight favours its own support
        assert!(RingPresentation::new(p.grading.clone(), vec![f], vec![other]).is_ok());
    }
}
