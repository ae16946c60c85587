use std::collections::BTreeMap;

use super::{
    chain_delta, expected_cokernel_dim, s_measure, s_measure_applies, ReductionStep, ReductionTrace,
    StepKind,
};
use crate::error::{CoxError, Result};
use crate::graph::ResolutionGraph;
use crate::ring::MultiDegree;

pub const DEFAULT_STEP_CAP: usize = 10_000;

struct Walker<'a> {
    g: &'a ResolutionGraph,
    /// position in the reduction order, by node id
    rank: BTreeMap<usize, usize>,
    trace: ReductionTrace,
    measured: bool,
    cap: usize,
}

impl<'a> Walker<'a> {
    fn new(g: &'a ResolutionGraph, d: &MultiDegree, cap: usize) -> Result<Self> {
        if d.len() != g.len() {
            return Err(CoxError::param(format!("degree has {} entries, graph has {} nodes", d.len(), g.len())));
        }
        let rank = g.reduction_order().into_iter().enumerate().map(|(r, v)| (v, r)).collect();
        let measured = s_measure_applies(g);
        let mut trace = ReductionTrace::new(d.clone());
        if measured {
            trace.measures.push(s_measure(d));
        }
        Ok(Self { g, rank, trace, measured, cap })
    }

    fn at(&self, v: usize) -> i64 {
        self.trace.terminal.0[self.g.index_of(v).expect("node of this graph")]
    }

    fn by_rank(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.g.nodes.clone();
        v.sort_by_key(|n| self.rank[n]);
        v
    }

    fn apply(&mut self, kind: StepKind) -> Result<()> {
        if self.trace.steps.len() >= self.cap {
            return Err(CoxError::NonTermination { cap: self.cap, trace: Box::new(self.trace.clone()) });
        }
        let before = self.trace.terminal.clone();
        let after = &before + &chain_delta(self.g, &kind.curves()).scaled(kind.sign());
        let mut step = ReductionStep {
            kind,
            degree_before: before,
            degree_after: after.clone(),
            expected: super::ExpectedDim::Value(0),
        };
        step.expected = expected_cokernel_dim(&step, self.g)
            .map_err(|e| CoxError::Internal(format!("reduction produced an invalid step: {e}")))?;
        if self.measured {
            self.trace.measures.push(s_measure(&after));
        }
        self.trace.steps.push(step);
        self.trace.terminal = after;
        Ok(())
    }
}

/// Repeatedly subtracts the order-lowest curve with negative degree.
pub fn reduce_to_nef(d: &MultiDegree, g: &ResolutionGraph, step_cap: usize) -> Result<ReductionTrace> {
    let mut w = Walker::new(g, d, step_cap)?;
    let order = w.by_rank();
    while let Some(&i) = order.iter().find(|&&v| w.at(v) < 0) {
        w.apply(StepKind::SubtractCurve { curve: i })?;
    }
    Ok(w.trace)
}

/// Branch end a lone one at `p` is moved to: the end of its own branch, the
/// long branch's end from the center, the far end of a chain.
pub fn basic_target(g: &ResolutionGraph, p: usize) -> Result<usize> {
    let layout = g.layout().ok_or_else(|| CoxError::UnsupportedGraph("tree is not star shaped".into()))?;
    let end = |b: &Vec<usize>| *b.last().expect("branches are nonempty");
    match layout.center {
        None => Ok(end(&layout.branches[0])),
        Some(c) if c == p => Ok(end(&layout.branches[layout.long_branch_index()])),
        Some(_) => {
            let (b, _) = layout.locate(p).ok_or_else(|| CoxError::param(format!("unknown node {p}")))?;
            Ok(end(&layout.branches[b]))
        }
    }
}

/// Zero, or a positive multiple of a single node carrying a leaf variable.
pub fn is_basic(d: &MultiDegree, g: &ResolutionGraph) -> bool {
    let nz: Vec<usize> = (0..d.len()).filter(|&i| d.0[i] != 0).collect();
    match nz.as_slice() {
        [] => true,
        [i] => d.0[*i] > 0 && g.leaf_nodes().contains(&g.nodes[*i]),
        _ => false,
    }
}

/// From a nef degree: add curves with degree at least two, join pairs of
/// ones by chains, then shift a remaining lone one to a branch end.
pub fn reduce_nef_to_basic(d: &MultiDegree, g: &ResolutionGraph, step_cap: usize) -> Result<ReductionTrace> {
    if !d.is_nef() {
        return Err(CoxError::param(format!("degree {d} is not nef")));
    }
    let mut w = Walker::new(g, d, step_cap)?;
    let order = w.by_rank();
    loop {
        if let Some(&i) = order.iter().find(|&&v| w.at(v) >= 2) {
            w.apply(StepKind::AddCurve { curve: i })?;
            continue;
        }
        let ones: Vec<usize> = order.iter().copied().filter(|&v| w.at(v) == 1).collect();
        if ones.len() < 2 {
            break;
        }
        // order-least pair of ones joined by zeros
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for (a, &i) in ones.iter().enumerate() {
            for &j in &ones[a + 1..] {
                let path = g.path(i, j).expect("tree is connected");
                if path[1..path.len() - 1].iter().all(|&v| w.at(v) == 0) {
                    best = Some((i, j, path));
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        let (from, to, path) = best.ok_or_else(|| CoxError::Internal("no pair of ones joined by zeros".into()))?;
        w.apply(StepKind::AddChain { from, to, path })?;
    }
    // shift phase
    if let Some(p) = order.iter().copied().find(|&v| w.at(v) == 1) {
        let leaf = basic_target(g, p)?;
        let mut p = p;
        while p != leaf {
            let route = g.path(p, leaf).expect("tree is connected");
            let path = route[1..].to_vec();
            w.apply(StepKind::ShiftToLeaf { from: p, to: leaf, path })?;
            p = route[1];
        }
    }
    Ok(w.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_custom_tree, build_singularity, Family};

    fn kinds(t: &ReductionTrace) -> Vec<Vec<usize>> {
        t.steps.iter().map(|s| s.kind.curves()).collect()
    }

    #[test]
    fn d4_to_nef() {
        let g = build_singularity(Family::D, 4).unwrap();
        let t = reduce_to_nef(&MultiDegree(vec![0, -1, 0, 0]), &g, DEFAULT_STEP_CAP).unwrap();
        assert_eq!(kinds(&t), vec![vec![1], vec![0], vec![2], vec![3], vec![0], vec![1]]);
        assert_eq!(t.terminal, MultiDegree(vec![0, 1, 0, 0]));
        assert!(t.is_composed());
        let z = reduce_to_nef(&MultiDegree::zero(4), &g, DEFAULT_STEP_CAP).unwrap();
        assert!(z.steps.is_empty());
        assert!(reduce_to_nef(&MultiDegree(vec![-1, 0, 0, 0]), &g, DEFAULT_STEP_CAP).unwrap().terminal.is_nef());
    }

    #[test]
    fn d4_to_basic() {
        let g = build_singularity(Family::D, 4).unwrap();
        let t = reduce_nef_to_basic(&MultiDegree(vec![0, 1, 1, 0]), &g, DEFAULT_STEP_CAP).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].kind, StepKind::AddChain { from: 1, to: 2, path: vec![1, 0, 2] });
        assert_eq!(t.terminal, MultiDegree(vec![0, 0, 0, 1]));
        let t = reduce_nef_to_basic(&MultiDegree(vec![1, 0, 0, 0]), &g, DEFAULT_STEP_CAP).unwrap();
        assert_eq!(t.terminal, MultiDegree(vec![0, 0, 0, 2]));
        assert_eq!(t.steps[0].expected, super::super::ExpectedDim::Value(1));
        let t = reduce_nef_to_basic(&MultiDegree(vec![1, 1, 1, 2]), &g, DEFAULT_STEP_CAP).unwrap();
        assert!(is_basic(&t.terminal, &g));
        assert!(t.measure_non_increasing());
    }

    #[test]
    fn long_shift_d5() {
        let g = build_singularity(Family::D, 5).unwrap();
        let t = reduce_nef_to_basic(&MultiDegree::unit(5, 0), &g, DEFAULT_STEP_CAP).unwrap();
        let after: Vec<MultiDegree> = t.steps.iter().map(|s| s.degree_after.clone()).collect();
        assert_eq!(after, vec![MultiDegree(vec![0, 0, 0, 1, 1]), MultiDegree(vec![0, 0, 0, 0, 3])]);
        assert!(t.steps.iter().all(|s| matches!(s.expected, super::super::ExpectedDim::Value(_))));
    }

    #[test]
    fn counterexample_trace() {
        let g = build_custom_tree(&[2, 2, 3]).unwrap();
        let mut d = MultiDegree::zero(8);
        d.0[7] = 2;
        let t = reduce_nef_to_basic(&d, &g, DEFAULT_STEP_CAP).unwrap();
        assert_eq!(t.steps[0].kind, StepKind::AddCurve { curve: 7 });
        assert_eq!(t.steps[0].expected, super::super::ExpectedDim::Value(1));
        assert_eq!(t.terminal, d);
    }
}
