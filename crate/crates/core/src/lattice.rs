//! Hilbert bases of monoids `{x >= 0 : A x = 0}` and minimal solutions of
//! `A x = d`, `x >= 0`.
//!
//! Extreme rays come from a double-description pass over the nonnegative
//! orthant. Every Hilbert-basis element lies in some simplicial subcone
//! spanned by linearly independent rays, either as a ray or as a lattice
//! point of the half-open fundamental parallelepiped, so enumerating those
//! points over all ray subsets and keeping the componentwise-minimal ones
//! yields the basis.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CoxError, PartialResult, Result};
use crate::linalg::{column_hermite, determinant, integer_kernel, solve_full_column_rank};

/// Default cap on the number of parallelepiped points visited.
pub const DEFAULT_POINT_LIMIT: u64 = 5_000_000;

type Mask = u128;

fn overflow(ctx: &'static str) -> CoxError {
    CoxError::Overflow(ctx)
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn zero_mask(v: &[i128]) -> Mask {
    v.iter()
        .enumerate()
        .filter(|(_, x)| **x == 0)
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Extreme rays of the pointed cone `{x >= 0 : A x = 0}`, primitive and sorted.
pub fn extreme_rays(a: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    if ncols > Mask::BITS as usize {
        return Err(CoxError::param(format!("at most {} variables supported", Mask::BITS)));
    }
    let mut rays: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    for row in a {
        if row.len() != ncols {
            return Err(CoxError::param("equation length does not match variable count"));
        }
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| {
                r.iter().zip(row).try_fold(0i128, |s, (&x, &c)| {
                    x.checked_mul(c as i128).and_then(|p| s.checked_add(p))
                })
            })
            .collect::<Option<_>>()
            .ok_or_else(|| overflow("extreme ray evaluation"))?;
        let masks: Vec<Mask> = rays.iter().map(|r| zero_mask(r)).collect();
        let mut next: Vec<Vec<i128>> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        next.extend((0..rays.len()).filter(|&i| vals[i] == 0).map(|i| rays[i].clone()));
        for &p in &pos {
            for &q in &neg {
                let common = masks[p] & masks[q];
                let blocked = (0..rays.len())
                    .any(|r| r != p && r != q && masks[r] & common == common);
                if blocked {
                    continue;
                }
                let (vp, vq) = (vals[p], -vals[q]);
                let mut comb: Vec<i128> = rays[q]
                    .iter()
                    .zip(&rays[p])
                    .map(|(&xq, &xp)| {
                        vp.checked_mul(xq)
                            .zip(vq.checked_mul(xp))
                            .and_then(|(a, b)| a.checked_add(b))
                    })
                    .collect::<Option<_>>()
                    .ok_or_else(|| overflow("extreme ray combination"))?;
                gcd_normalize(&mut comb);
                next.push(comb);
            }
        }
        next.sort();
        next.dedup();
        rays = next;
    }
    rays.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).map_err(|_| overflow("extreme ray")))
                .collect()
        })
        .collect()
}

/// Lattice of integer points in the linear span of a cone, with coordinates.
struct SpanLattice {
    /// Basis vectors of the lattice, each of length `ncols`.
    basis: Vec<Vec<i128>>,
    /// Rays expressed in basis coordinates.
    rays: Vec<Vec<i64>>,
}

impl SpanLattice {
    fn new(a: &[Vec<i64>], ncols: usize, rays: &[Vec<i64>]) -> Result<Self> {
        // coordinates vanishing on every ray vanish on the cone
        let mut eqs: Vec<Vec<i64>> = a.to_vec();
        for j in 0..ncols {
            if rays.iter().all(|r| r[j] == 0) {
                let mut unit = vec![0; ncols];
                unit[j] = 1;
                eqs.push(unit);
            }
        }
        let kernel = integer_kernel(&eqs, ncols);
        let basis: Vec<Vec<i128>> = kernel
            .iter()
            .map(|v| v.iter().map(|x| x.to_i128()).collect::<Option<_>>())
            .collect::<Option<_>>()
            .ok_or_else(|| overflow("lattice basis"))?;
        let r = basis.len();
        let mat: Vec<Vec<BigInt>> = (0..ncols)
            .map(|i| (0..r).map(|j| kernel[j][i].clone()).collect())
            .collect();
        let mut coords = Vec::with_capacity(rays.len());
        for ray in rays {
            let rhs: Vec<BigInt> = ray.iter().map(|&x| x.into()).collect();
            let c = solve_full_column_rank(&mat, &rhs)
                .ok_or_else(|| CoxError::Internal("ray outside its span lattice".into()))?;
            let c: Vec<i64> = c
                .iter()
                .map(|q| {
                    if !q.is_integer() {
                        return Err(CoxError::Internal("ray not in span lattice".into()));
                    }
                    q.to_integer().to_i64().ok_or_else(|| overflow("ray coordinates"))
                })
                .collect::<Result<_>>()?;
            coords.push(c);
        }
        Ok(Self { basis, rays: coords })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn embed(&self, c: &[i128]) -> Result<Vec<i64>> {
        let n = self.basis.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| {
                let s = self.basis.iter().zip(c).try_fold(0i128, |s, (b, &x)| {
                    b[i].checked_mul(x).and_then(|p| s.checked_add(p))
                });
                s.and_then(|s| i64::try_from(s).ok()).ok_or_else(|| overflow("lattice embedding"))
            })
            .collect()
    }
}

/// Visits all r-subsets of `0..n` in lexicographic order.
fn for_each_subset(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if r > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn adjugate(v: &[Vec<i64>]) -> Result<Vec<Vec<i128>>> {
    let r = v.len();
    if r == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut adj = vec![vec![0i128; r]; r];
    for i in 0..r {
        for j in 0..r {
            let minor: Vec<Vec<i64>> = (0..r)
                .filter(|&k| k != j)
                .map(|k| (0..r).filter(|&l| l != i).map(|l| v[k][l]).collect())
                .collect();
            let d = determinant(&minor).to_i128().ok_or_else(|| overflow("adjugate"))?;
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    Ok(adj)
}

/// Lattice points `V * frac(V^-1 k)` of the fundamental parallelepiped of
/// the columns of `v`, one per coset of `Z^r / V Z^r`.
fn parallelepiped_points(
    v: &[Vec<i64>],
    budget: &mut u64,
    mut emit: impl FnMut(Vec<i128>) -> Result<()>,
) -> Result<bool> {
    let r = v.len();
    let det = determinant(v).to_i128().ok_or_else(|| overflow("simplex determinant"))?;
    if det == 0 {
        return Ok(true);
    }
    let abs = det.abs();
    if abs == 1 {
        return Ok(true);
    }
    if (abs as u128) > u128::from(*budget) {
        return Ok(false);
    }
    let adj = adjugate(v)?;
    let big: Vec<Vec<BigInt>> = v.iter().map(|row| row.iter().map(|&x| x.into()).collect()).collect();
    let (h, _, _) = column_hermite(&big, r);
    let diag: Vec<i128> = (0..r)
        .map(|i| h[i][i].to_i128().ok_or_else(|| overflow("hermite diagonal")))
        .collect::<Result<_>>()?;
    let sign = det.signum();
    let mut k = vec![0i128; r];
    loop {
        if *budget == 0 {
            return Ok(false);
        }
        *budget -= 1;
        if k.iter().any(|&x| x != 0) {
            let f: Vec<i128> = (0..r)
                .map(|i| {
                    let u: i128 = (0..r).map(|j| adj[i][j] * k[j]).sum();
                    (sign * u).rem_euclid(abs)
                })
                .collect();
            let p: Vec<i128> = (0..r)
                .map(|i| {
                    let s: i128 = (0..r).map(|j| v[i][j] as i128 * f[j]).sum();
                    debug_assert_eq!(s % abs, 0);
                    s / abs
                })
                .collect();
            if p.iter().any(|&x| x != 0) {
                emit(p)?;
            }
        }
        let Some(i) = (0..r).find(|&i| k[i] + 1 < diag[i]) else {
            return Ok(true);
        };
        k[i] += 1;
        for x in k.iter_mut().take(i) {
            *x = 0;
        }
    }
}

/// Componentwise-minimal elements of a candidate set, sorted canonically.
fn minimal_elements(cands: BTreeSet<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut sorted: Vec<Vec<i64>> = cands.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    sorted.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for h in sorted {
        if !kept.iter().any(|c| c.iter().zip(&h).all(|(a, b)| a <= b)) {
            kept.push(h);
        }
    }
    kept.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    kept
}

/// Candidate generators of `{x >= 0 : A x = 0}`, optionally filtered.
fn candidates(
    a: &[Vec<i64>],
    ncols: usize,
    limit: u64,
    keep: impl Fn(&[i64]) -> bool,
) -> Result<BTreeSet<Vec<i64>>> {
    let rays = extreme_rays(a, ncols)?;
    let mut out: BTreeSet<Vec<i64>> = rays.iter().filter(|r| keep(r)).cloned().collect();
    if rays.is_empty() {
        return Ok(out);
    }
    let lat = SpanLattice::new(a, ncols, &rays)?;
    let r = lat.dim();
    let mut budget = limit;
    let mut complete = true;
    let result = for_each_subset(lat.rays.len(), r, |sub| {
        // columns of v are the chosen rays
        let v: Vec<Vec<i64>> = (0..r).map(|i| sub.iter().map(|&s| lat.rays[s][i]).collect()).collect();
        let finished = parallelepiped_points(&v, &mut budget, |p| {
            let x = lat.embed(&p)?;
            if keep(&x) {
                out.insert(x);
            }
            Ok(())
        })?;
        if !finished {
            complete = false;
            return Err(CoxError::Resource {
                message: format!("parallelepiped enumeration exceeded {limit} points"),
                partial: None,
            });
        }
        Ok(())
    });
    match result {
        Ok(()) => Ok(out),
        Err(CoxError::Resource { message, .. }) if !complete => Err(CoxError::Resource {
            message,
            partial: Some(PartialResult::Vectors(minimal_elements(out))),
        }),
        Err(e) => Err(e),
    }
}

/// Hilbert basis of the monoid `{x in Z^ncols : x >= 0, A x = 0}`.
///
/// The result is sorted by coordinate sum, then lexicographically.
pub fn hilbert_basis(a: &[Vec<i64>], ncols: usize, limit: u64) -> Result<Vec<Vec<i64>>> {
    Ok(minimal_elements(candidates(a, ncols, limit, |_| true)?))
}

/// Minimal nonnegative solutions of `A x = d` together with the Hilbert
/// basis of the homogeneous monoid.
///
/// Every solution is one minimal solution plus a nonnegative combination of
/// the homogeneous basis.
pub fn minimal_solutions(
    a: &[Vec<i64>],
    d: &[i64],
    ncols: usize,
    limit: u64,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    if a.len() != d.len() {
        return Err(CoxError::param("right-hand side length does not match equation count"));
    }
    let hom: Vec<Vec<i64>> = a
        .iter()
        .zip(d)
        .map(|(row, &di)| {
            let mut r = row.clone();
            r.push(-di);
            r
        })
        .collect();
    let cands = candidates(&hom, ncols + 1, limit, |x| x[ncols] <= 1).map_err(|e| match e {
        CoxError::Resource { message, partial: Some(PartialResult::Vectors(v)) } => CoxError::Resource {
            message,
            partial: Some(PartialResult::Vectors(
                v.into_iter().filter(|x| x[ncols] == 1).map(|mut x| {
                    x.pop();
                    x
                }).collect(),
            )),
        },
        other => other,
    })?;
    let minimal = minimal_elements(cands);
    let mut particular = Vec::new();
    let mut recession = Vec::new();
    for mut x in minimal {
        let t = x.pop().unwrap_or(0);
        if t == 1 {
            particular.push(x);
        } else if t == 0 {
            recession.push(x);
        }
    }
    if d.iter().all(|x| x.is_zero()) {
        particular = vec![vec![0; ncols]];
    }
    Ok((particular, recession))
}
