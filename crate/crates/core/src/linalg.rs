//! Exact dense and sparse linear algebra over the integers and rationals.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..ncols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Solves `m x = b` exactly for a matrix of full column rank.
///
/// Returns `None` when the system is inconsistent.
pub fn solve_full_column_rank(m: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..=ncols {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][ncols].clone();
    }
    Some(x)
}

/// Column-style Hermite reduction: finds a unimodular `u` with `a u = h`,
/// where `h` is in column echelon form.
///
/// Returns `(h, u, rank)`; the last `ncols - rank` columns of `u` form a basis
/// of the integer kernel of `a`.
pub fn column_hermite(a: &[Vec<BigInt>], ncols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= q * col_i
    let axpy = |m: &mut Vec<Vec<BigInt>>, j: usize, i: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let v = &row[i] * q;
            row[j] -= v;
        }
    };
    let mut pc = 0;
    for r in 0..h.len() {
        if pc >= ncols {
            break;
        }
        loop {
            // smallest nonzero entry at or right of the pivot column
            let best = (pc..ncols)
                .filter(|&c| !h[r][c].is_zero())
                .min_by(|&x, &y| h[r][x].abs().cmp(&h[r][y].abs()));
            let Some(best) = best else { break };
            if best != pc {
                swap_cols(&mut h, pc, best);
                swap_cols(&mut u, pc, best);
            }
            let mut done = true;
            for c in pc + 1..ncols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = h[r][c].div_floor(&h[r][pc]);
                axpy(&mut h, c, pc, &q);
                axpy(&mut u, c, pc, &q);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[r][pc].is_zero() {
            if h[r][pc].is_negative() {
                for row in h.iter_mut() {
                    row[pc] = -row[pc].clone();
                }
                for row in u.iter_mut() {
                    row[pc] = -row[pc].clone();
                }
            }
            pc += 1;
        }
    }
    (h, u, pc)
}

/// Basis of the integer kernel `{x in Z^ncols : a x = 0}` as column vectors.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    let (_, u, rank) = column_hermite(&big, ncols);
    (rank..ncols)
        .map(|c| u.iter().map(|row| row[c].clone()).collect())
        .collect()
}

/// Incremental exact rank of sparse rational vectors.
///
/// Columns are identified by keys with a total order; each inserted row is
/// reduced against the stored pivots, keyed by their largest column.
pub struct SparseEliminator<K: Ord + Clone + Hash> {
    pivots: HashMap<K, BTreeMap<K, BigRational>>,
}

impl<K: Ord + Clone + Hash> Default for SparseEliminator<K> {
    fn default() -> Self {
        Self { pivots: HashMap::new() }
    }
}

impl<K: Ord + Clone + Hash> SparseEliminator<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a row; returns true when it increased the rank.
    pub fn insert(&mut self, mut row: BTreeMap<K, BigRational>) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((lead, coeff)) = row.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    // pivots are normalised to leading coefficient one
                    for (k, v) in p {
                        let e = row.entry(k.clone()).or_insert_with(BigRational::zero);
                        *e -= &coeff * v;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = coeff.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&[vec![-2, 1], vec![1, -2]]), 3.into());
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), (-1).into());
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0.into());
        let d4 = vec![vec![-2, 1, 1, 1], vec![1, -2, 0, 0], vec![1, 0, -2, 0], vec![1, 0, 0, -2]];
        assert_eq!(determinant(&d4), 4.into());
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = vec![vec![1, -2, 1, 0], vec![0, 1, -2, 1]];
        let k = integer_kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let s: BigInt = row.iter().zip(v).map(|(&x, y)| BigInt::from(x) * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x - 2y = 0 has kernel generated by (1, 1), not (2, 2)
        let k = integer_kernel(&[vec![2, -2]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1.into(), 1.into()]);
    }

    #[test]
    fn hermite_diagonal_product_is_determinant() {
        let m = big(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4]]);
        let (h, _, rank) = column_hermite(&m, 3);
        assert_eq!(rank, 3);
        let prod: BigInt = (0..3).map(|i| h[i][i].clone()).product();
        let det = determinant(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 4]]);
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn sparse_rank_detects_dependency() {
        let mut e = SparseEliminator::<u32>::new();
        let r = |v: &[(u32, i64)]| v.iter().map(|&(k, c)| (k, BigRational::from_integer(c.into()))).collect();
        assert!(e.insert(r(&[(1, 1), (2, 1)])));
        assert!(e.insert(r(&[(2, 1), (3, 1)])));
        assert!(!e.insert(r(&[(1, 1), (3, -1)])));
        assert!(e.insert(r(&[(0, 5)])));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn rank_and_solve() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        let m = big(&[&[1, 0], &[1, 1], &[0, 2]]);
        let x = solve_full_column_rank(&m, &[3.into(), 5.into(), 4.into()]).unwrap();
        assert_eq!(x, vec![BigRational::from_integer(3.into()), BigRational::from_integer(2.into())]);
        assert!(solve_full_column_rank(&m, &[3.into(), 5.into(), 5.into()]).is_none());
    }
}
