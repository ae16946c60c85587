//! Exact cokernel dimensions of multiplication maps between graded pieces.
//!
//! For a step with multiplier `mu` (the product of `y` over the step's
//! curves) the quotient `S_target / mu * S_source` equals
//! `k[vars]_target / (mu, relations)_target`. Modulo `mu` the monomials not
//! divisible by `mu` form a basis, so the dimension is their count minus
//! the rank of the relation multiples with `mu`-divisible terms dropped.
//!
//! When every monomial of the target degree missing one of the
//! multiplier's variables lies in a finite fiber (always the case on a
//! negative definite graph, since a nonzero degree-zero monomial involves
//! every `y`), both sides are enumerated exactly by the Diophantine solver.
//! Otherwise pieces are infinite-dimensional and everything is truncated by
//! a weight under which the relations are homogeneous. The ideal is then
//! weight-homogeneous and the computation splits into independent weight
//! blocks, making every truncation exact for the weights it covers.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::Serialize;

use super::{ReductionStep, StepKind};
use crate::error::{CoxError, PartialResult, Result};
use crate::lattice::DEFAULT_POINT_LIMIT;
use crate::linalg::SparseEliminator;
use crate::ring::{
    solve_degree_system_excluding, DegreeEnumerator, Grading, Monomial, MultiDegree, RingPresentation,
    TruncationWeights,
};

pub const DEFAULT_TRUNCATION_CAP: u64 = 24;
pub const HARD_TRUNCATION_CAP: u64 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CokernelMethod {
    /// Exact over the whole (finite) piece.
    Finite,
    /// Over monomials of weight at most `cap`.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CokernelDim {
    pub value: u64,
    pub method: CokernelMethod,
    /// Dimension one weight unit below the cap.
    pub previous: u64,
    /// Truncation cap; for finite pieces, the least cap covering them.
    pub cap: u64,
    /// Values at `cap` and `cap - 1` agree and the cap clears the lightest
    /// target monomial by the weight of the multiplier and the relations.
    pub stabilized: bool,
    /// Lightest monomial of the target degree found under the cap, in
    /// weight units; `None` when the truncated piece is empty.
    pub min_weight: Option<u64>,
    pub weight_denominator: u64,
    /// Whether the truncation weights make every relation homogeneous.
    pub exact_weights: bool,
}

/// Multiplier monomial and target degree of a step.
pub fn step_multiplier(pres: &RingPresentation, step: &ReductionStep) -> Result<(Monomial, MultiDegree)> {
    let g = &pres.grading;
    let mut mu = Monomial::one(g.nvars());
    for c in step.kind.curves() {
        let i = g
            .var_index(&format!("y{c}"))
            .ok_or_else(|| CoxError::param(format!("no variable y{c}")))?;
        mu.exponents[i] += 1;
    }
    let target = match step.kind {
        StepKind::SubtractCurve { .. } | StepKind::ShiftToLeaf { .. } => step.degree_before.clone(),
        StepKind::AddCurve { .. } | StepKind::AddChain { .. } => step.degree_after.clone(),
    };
    Ok((mu, target))
}

struct Blocks {
    /// weight -> number of basis monomials not divisible by mu
    basis: BTreeMap<u64, u64>,
    /// weight -> reduced relation multiples (max term weight)
    rows: BTreeMap<u64, Vec<BTreeMap<Monomial, BigRational>>>,
    min_weight: Option<u64>,
}

fn collect(pres: &RingPresentation, w: &TruncationWeights, mu: &Monomial, target: &MultiDegree, cap_units: u64) -> Result<Blocks> {
    let en = DegreeEnumerator::new(&pres.grading, &w.numerators, &[])?;
    let mut basis: BTreeMap<u64, u64> = BTreeMap::new();
    let mut min_weight: Option<u64> = None;
    en.for_each(target, cap_units, |m, wt| {
        min_weight = Some(min_weight.map_or(wt, |b| b.min(wt)));
        if !mu.divides(m) {
            *basis.entry(wt).or_default() += 1;
        }
    });
    let mut rows: BTreeMap<u64, Vec<BTreeMap<Monomial, BigRational>>> = BTreeMap::new();
    for (r, f) in pres.relations.iter().enumerate() {
        let wf = f.monomials().map(|m| w.units(m)).min().unwrap_or(0);
        if wf > cap_units {
            continue;
        }
        let source = target - &pres.relation_degree(r);
        en.for_each(&source, cap_units - wf, |m, _| {
            let mut row = BTreeMap::new();
            let mut top = 0;
            for (t, c) in &f.terms {
                let tm = t.mul(m);
                top = top.max(w.units(&tm));
                if !mu.divides(&tm) {
                    row.insert(tm, c.clone());
                }
            }
            if top <= cap_units && !row.is_empty() {
                rows.entry(top).or_default().push(row);
            }
        });
    }
    Ok(Blocks { basis, rows, min_weight })
}

/// Truncated dimension at every cap `c <= cap_units`, as a function.
fn dims(blocks: &Blocks, exact: bool, caps: &[u64]) -> Vec<u64> {
    if exact {
        let mut per_weight: BTreeMap<u64, i64> = BTreeMap::new();
        for (&wt, &n) in &blocks.basis {
            *per_weight.entry(wt).or_default() += n as i64;
        }
        for (&wt, rs) in &blocks.rows {
            let mut el = SparseEliminator::new();
            for r in rs {
                el.insert(r.clone());
            }
            *per_weight.entry(wt).or_default() -= el.rank() as i64;
        }
        caps.iter()
            .map(|&c| per_weight.range(..=c).map(|(_, v)| *v).sum::<i64>().max(0) as u64)
            .collect()
    } else {
        caps.iter()
            .map(|&c| {
                let n: u64 = blocks.basis.range(..=c).map(|(_, v)| *v).sum();
                let mut el = SparseEliminator::new();
                for r in blocks.rows.range(..=c).flat_map(|(_, v)| v) {
                    el.insert(r.clone());
                }
                n.saturating_sub(el.rank() as u64)
            })
            .collect()
    }
}

fn margin(pres: &RingPresentation, w: &TruncationWeights, mu: &Monomial) -> u64 {
    let rel = pres.relations.iter().map(|f| w.poly_units(f)).max().unwrap_or(0);
    rel + w.units(mu)
}

/// Monomials of degree `d` not divisible by the squarefree `mu`, or `None`
/// when that set is infinite (or too large for the solver).
fn finite_fiber(g: &Grading, d: &MultiDegree, mu: &Monomial) -> Result<Option<BTreeSet<Monomial>>> {
    if mu.exponents.iter().any(|&e| e > 1) {
        return Ok(None);
    }
    let mut out = BTreeSet::new();
    for j in mu.support() {
        match solve_degree_system_excluding(g, d, &[j], DEFAULT_POINT_LIMIT) {
            Ok(s) if s.recession.is_empty() => out.extend(s.particular),
            Ok(_) | Err(CoxError::Resource { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

/// Exact dimension when all pieces involved are finite.
pub fn cokernel_dimension_finite(pres: &RingPresentation, step: &ReductionStep) -> Result<Option<CokernelDim>> {
    let (mu, target) = step_multiplier(pres, step)?;
    let g = &pres.grading;
    let w = TruncationWeights::for_presentation(pres);
    let Some(monos) = finite_fiber(g, &target, &mu)? else {
        return Ok(None);
    };
    let block = |wt: u64| if w.exact { wt } else { 0 };
    let mut basis: BTreeMap<u64, u64> = BTreeMap::new();
    for m in &monos {
        *basis.entry(block(w.units(m))).or_default() += 1;
    }
    let mut rows: BTreeMap<u64, Vec<BTreeMap<Monomial, BigRational>>> = BTreeMap::new();
    for (r, f) in pres.relations.iter().enumerate() {
        let Some(sources) = finite_fiber(g, &(&target - &pres.relation_degree(r)), &mu)? else {
            return Ok(None);
        };
        for m in &sources {
            let row: BTreeMap<Monomial, BigRational> = f
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .filter(|(tm, _)| !mu.divides(tm))
                .collect();
            if let Some(top) = row.keys().map(|tm| w.units(tm)).max() {
                rows.entry(block(top)).or_default().push(row);
            }
        }
    }
    let min_weight = monos.iter().map(|m| w.units(m)).min();
    let max_weight = monos.iter().map(|m| w.units(m)).max().unwrap_or(0);
    let value = dims(&Blocks { basis, rows, min_weight }, w.exact, &[u64::MAX])[0];
    Ok(Some(CokernelDim {
        value,
        method: CokernelMethod::Finite,
        previous: value,
        cap: max_weight.div_ceil(w.denominator),
        stabilized: true,
        min_weight,
        weight_denominator: w.denominator,
        exact_weights: w.exact,
    }))
}

/// Dimension of the step's cokernel over all monomials of weight at most
/// `cap` (weights from [`TruncationWeights::for_presentation`]).
pub fn cokernel_dimension(pres: &RingPresentation, step: &ReductionStep, cap: u64) -> Result<CokernelDim> {
    if cap == 0 {
        return Err(CoxError::param("truncation cap must be positive"));
    }
    let (mu, target) = step_multiplier(pres, step)?;
    let w = TruncationWeights::for_presentation(pres);
    let cap_units = w.cap_units(cap);
    let prev_units = w.cap_units(cap - 1);
    let blocks = collect(pres, &w, &mu, &target, cap_units)?;
    let d = dims(&blocks, w.exact, &[cap_units, prev_units]);
    let clears = blocks.min_weight.is_some_and(|m| prev_units >= m + margin(pres, &w, &mu));
    Ok(CokernelDim {
        value: d[0],
        previous: d[1],
        cap,
        method: CokernelMethod::Truncated,
        stabilized: d[0] == d[1] && clears,
        min_weight: blocks.min_weight,
        weight_denominator: w.denominator,
        exact_weights: w.exact,
    })
}

/// Exact when the pieces are finite. Otherwise raises the cap from `start`
/// (or higher, when the target's lightest monomial needs it) until the
/// value stabilizes; resource error past `hard`.
pub fn cokernel_dimension_adaptive(
    pres: &RingPresentation,
    step: &ReductionStep,
    start: u64,
    hard: u64,
) -> Result<CokernelDim> {
    if let Some(r) = cokernel_dimension_finite(pres, step)? {
        return Ok(r);
    }
    let (mu, target) = step_multiplier(pres, step)?;
    let w = TruncationWeights::for_presentation(pres);
    let en = DegreeEnumerator::new(&pres.grading, &w.numerators, &[])?;
    let Some(wmin) = en.min_weight(&target, w.cap_units(hard)) else {
        return Err(CoxError::Resource {
            message: format!("no monomial of degree {target} within truncation cap {hard}"),
            partial: None,
        });
    };
    let need = (wmin + margin(pres, &w, &mu)).div_ceil(w.denominator) + 1;
    let mut cap = start.max(need);
    let mut last = None;
    while cap <= hard {
        let r = cokernel_dimension(pres, step, cap)?;
        if r.stabilized {
            return Ok(r);
        }
        last = Some(r.value);
        cap += 2;
    }
    Err(CoxError::Resource {
        message: format!("cokernel dimension did not stabilize by truncation cap {hard}"),
        partial: last.map(|value| PartialResult::Dimension { value, cap: hard }),
    })
}
