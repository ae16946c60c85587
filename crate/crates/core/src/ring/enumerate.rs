//! Enumeration of all monomials of a fixed multidegree up to a weight cap.
//!
//! The degree system is brought to reduced row echelon form with pivots
//! chosen from the last variables, so the pivot exponents are affine in the
//! remaining (free) exponents. A depth-first search over the free exponents
//! then recovers the pivots exactly.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::grading::{Grading, MultiDegree};
use super::monomial::Monomial;
use crate::error::{CoxError, Result};

#[derive(Debug, Clone)]
pub struct DegreeEnumerator {
    nvars: usize,
    free: Vec<usize>,
    pivot_vars: Vec<usize>,
    /// `denom * x_pivot[r] = <rhs[r], d> - <coef[r], x_free>`
    coef: Vec<Vec<i64>>,
    rhs: Vec<Vec<i64>>,
    consistency: Vec<Vec<i64>>,
    denom: i64,
    weights: Vec<u64>,
    /// `monotone[r][k]`: coefficients of pivot r on free vars k.. are all >= 0
    monotone: Vec<Vec<bool>>,
}

impl DegreeEnumerator {
    /// Enumerator with integer variable weights (all at least one) and the
    /// listed variables forced to zero.
    pub fn new(g: &Grading, weights: &[u64], excluded: &[usize]) -> Result<Self> {
        let nvars = g.nvars();
        if weights.len() != nvars || weights.contains(&0) {
            return Err(CoxError::param("weights must be positive, one per variable"));
        }
        let n = g.rank();
        let active: Vec<usize> = (0..nvars).filter(|j| !excluded.contains(j)).collect();
        let width = active.len() + n;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = active
                    .iter()
                    .map(|&j| BigRational::from_integer(g.degree_matrix.entries[i][j].into()))
                    .collect();
                row.extend((0..n).map(|k| BigRational::from_integer(i64::from(i == k).into())));
                row
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in (0..active.len()).rev() {
            let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..width {
                        let v = &f * &m[r][j];
                        m[i][j] -= v;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let rank = r;
        let free_cols: Vec<usize> = (0..active.len()).filter(|c| !pivot_cols.contains(c)).collect();
        let denom = m
            .iter()
            .flatten()
            .fold(num_bigint::BigInt::from(1), |l, x| l.lcm(x.denom()));
        let to_int = |x: &BigRational| -> Result<i64> {
            (x * BigRational::from_integer(denom.clone()))
                .to_integer()
                .to_i64()
                .ok_or(CoxError::Overflow("enumerator coefficients"))
        };
        let mut coef = Vec::new();
        let mut rhs = Vec::new();
        for row in m.iter().take(rank) {
            coef.push(free_cols.iter().map(|&f| to_int(&row[f])).collect::<Result<Vec<_>>>()?);
            rhs.push((0..n).map(|k| to_int(&row[active.len() + k])).collect::<Result<Vec<_>>>()?);
        }
        let consistency = m[rank..]
            .iter()
            .map(|row| (0..n).map(|k| to_int(&row[active.len() + k])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let monotone = coef
            .iter()
            .map(|c| (0..=c.len()).map(|k| c[k..].iter().all(|&x| x >= 0)).collect())
            .collect();
        Ok(Self {
            nvars,
            free: free_cols.iter().map(|&c| active[c]).collect(),
            pivot_vars: pivot_cols.iter().map(|&c| active[c]).collect(),
            coef,
            rhs,
            consistency,
            denom: denom.to_i64().ok_or(CoxError::Overflow("enumerator denominator"))?,
            weights: weights.to_vec(),
            monotone,
        })
    }

    pub fn unit_weights(g: &Grading) -> Result<Self> {
        Self::new(g, &vec![1; g.nvars()], &[])
    }

    pub fn weight(&self, m: &Monomial) -> u64 {
        m.exponents.iter().zip(&self.weights).map(|(&e, &w)| u64::from(e) * w).sum()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Visits every monomial of degree `d` and weight at most `cap`.
    pub fn for_each(&self, d: &MultiDegree, cap: u64, mut f: impl FnMut(&Monomial, u64)) {
        let dot = |row: &[i64]| -> i64 { row.iter().zip(&d.0).map(|(a, b)| a * b).sum() };
        if self.consistency.iter().any(|row| dot(row) != 0) {
            return;
        }
        let mut num: Vec<i64> = self.rhs.iter().map(|r| dot(r)).collect();
        let mut exps = vec![0u32; self.nvars];
        self.dfs(0, 0, cap, &mut num, &mut exps, &mut f);
    }

    fn dfs(
        &self,
        k: usize,
        used: u64,
        cap: u64,
        num: &mut [i64],
        exps: &mut [u32],
        f: &mut impl FnMut(&Monomial, u64),
    ) {
        for (r, &v) in num.iter().enumerate() {
            if v < 0 && self.monotone[r][k] {
                return;
            }
        }
        if k == self.free.len() {
            let mut total = used;
            for (r, &v) in num.iter().enumerate() {
                if v < 0 || v % self.denom != 0 {
                    return;
                }
                let x = v / self.denom;
                let p = self.pivot_vars[r];
                total += x as u64 * self.weights[p];
                if total > cap {
                    return;
                }
                exps[p] = x as u32;
            }
            let m = Monomial::new(exps.to_vec());
            f(&m, total);
            return;
        }
        let var = self.free[k];
        let w = self.weights[var];
        let mut e = 0u32;
        loop {
            let wt = used + u64::from(e) * w;
            if wt > cap {
                break;
            }
            exps[var] = e;
            self.dfs(k + 1, wt, cap, num, exps, f);
            for (r, v) in num.iter_mut().enumerate() {
                *v -= self.coef[r][k];
            }
            e += 1;
        }
        for (r, v) in num.iter_mut().enumerate() {
            *v += self.coef[r][k] * i64::from(e);
        }
        exps[var] = 0;
    }

    /// Sorted list of monomials of degree `d` and weight at most `cap`.
    pub fn enumerate(&self, d: &MultiDegree, cap: u64) -> Vec<Monomial> {
        let mut out = Vec::new();
        self.for_each(d, cap, |m, _| out.push(m.clone()));
        out.sort();
        out
    }

    /// Smallest weight of a monomial of degree `d`, searching up to `cap`.
    pub fn min_weight(&self, d: &MultiDegree, cap: u64) -> Option<u64> {
        let mut best: Option<u64> = None;
        self.for_each(d, cap, |_, w| best = Some(best.map_or(w, |b| b.min(w))));
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_singularity, extended_degree_matrix, Family};

    #[test]
    fn d4_degree_e0() {
        let g = extended_degree_matrix(&build_singularity(Family::D, 4).unwrap());
        let e = DegreeEnumerator::unit_weights(&g).unwrap();
        let ms = e.enumerate(&g.unit(0), 3);
        let shown: Vec<String> = ms.iter().map(|m| g.display(m)).collect();
        assert_eq!(shown, vec!["x3^2*y3", "x2^2*y2", "x1^2*y1"]);
        assert_eq!(e.min_weight(&MultiDegree::zero(4), 10), Some(0));
    }

    #[test]
    fn excluded_variables() {
        let g = extended_degree_matrix(&build_singularity(Family::D, 4).unwrap());
        let y1 = g.var_index("y1").unwrap();
        let e = DegreeEnumerator::new(&g, &vec![1; 7], &[y1]).unwrap();
        assert!(e.enumerate(&g.unit(0), 12).iter().all(|m| m.exponents[y1] == 0));
        assert_eq!(e.enumerate(&g.unit(0), 12).len(), 2);
    }
}
