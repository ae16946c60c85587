use coxforge::cox::{candidate_presentation, presentation_for_graph};
use coxforge::graph::{build_singularity, extended_degree_matrix, intersection_matrix, CaseName, Family, ResolutionGraph};
use coxforge::reduction::{
    full_equivalence_audit, is_basic, reduce_nef_to_basic, reduce_to_nef, AuditCaps, ReductionTrace, StepKind,
    StepOutcome, DEFAULT_STEP_CAP,
};
use coxforge::ring::{normal_form, rational, solve_degree_system, Monomial, MultiDegree, Polynomial};
use proptest::prelude::*;

fn ade() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![
        (1usize..=8).prop_map(|n| (Family::A, n)),
        (4usize..=8).prop_map(|n| (Family::D, n)),
        (6usize..=8).prop_map(|n| (Family::E, n)),
    ]
}

fn case_and_degree() -> impl Strategy<Value = (ResolutionGraph, MultiDegree)> {
    ade().prop_flat_map(|(f, n)| {
        let g = build_singularity(f, n).unwrap();
        let len = g.len();
        (Just(g), prop::collection::vec(-3i64..=3, len).prop_map(MultiDegree))
    })
}

fn column_sum(g: &ResolutionGraph, curves: &[usize]) -> Vec<i64> {
    let m = intersection_matrix(g);
    let mut v = vec![0; g.len()];
    for c in curves {
        let j = g.index_of(*c).unwrap();
        for (i, x) in v.iter_mut().enumerate() {
            *x += m.entries[i][j];
        }
    }
    v
}

/// terminal = initial + sum of step deltas, with deltas recomputed from the
/// intersection matrix rather than taken from the trace
fn bookkeeping(g: &ResolutionGraph, t: &ReductionTrace) -> bool {
    let mut d = t.initial.0.clone();
    for s in &t.steps {
        if s.degree_before.0 != d {
            return false;
        }
        let sign = match s.kind {
            StepKind::SubtractCurve { .. } | StepKind::ShiftToLeaf { .. } => -1,
            StepKind::AddCurve { .. } | StepKind::AddChain { .. } => 1,
        };
        for (x, c) in d.iter_mut().zip(column_sum(g, &s.kind.curves())) {
            *x += sign * c;
        }
        if s.degree_after.0 != d {
            return false;
        }
    }
    d == t.terminal.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reductions_terminate_and_keep_books((g, d) in case_and_degree()) {
        let t = reduce_to_nef(&d, &g, DEFAULT_STEP_CAP).unwrap();
        prop_assert!(t.terminal.is_nef());
        let subtract_only = t.steps.iter().all(|s| matches!(s.kind, StepKind::SubtractCurve { .. }));
        prop_assert!(subtract_only);
        prop_assert!(bookkeeping(&g, &t));
        let b = reduce_nef_to_basic(&t.terminal, &g, DEFAULT_STEP_CAP).unwrap();
        prop_assert!(b.steps.iter().all(|s| s.degree_after.is_nef()));
        prop_assert!(is_basic(&b.terminal, &g), "{}", b.terminal);
        prop_assert!(bookkeeping(&g, &b));
        if !b.measures.is_empty() {
            prop_assert!(b.measure_non_increasing());
        }
    }

    #[test]
    fn degree_is_additive((f, n) in ade(), a in prop::collection::vec(0u32..4, 11), b in prop::collection::vec(0u32..4, 11)) {
        let g = extended_degree_matrix(&build_singularity(f, n).unwrap());
        let k = g.nvars();
        let (x, y) = (Monomial::new(a[..k].to_vec()), Monomial::new(b[..k].to_vec()));
        let lhs = g.degree_of(&x.mul(&y)).unwrap();
        prop_assert_eq!(lhs, &g.degree_of(&x).unwrap() + &g.degree_of(&y).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent_and_standard(
        n in 4usize..=7,
        terms in prop::collection::vec((prop::collection::vec(0u32..4, 10), -3i64..=3), 1..6),
    ) {
        let p = candidate_presentation(Family::D, n).unwrap();
        let k = p.grading.nvars();
        let mut poly = Polynomial::zero();
        for (e, c) in terms {
            poly.add_term(Monomial::new(e[..k].to_vec()), rational(c));
        }
        let nf = normal_form(&poly, &p);
        prop_assert_eq!(normal_form(&nf, &p), nf.clone());
        prop_assert!(nf.monomials().all(|m| p.is_standard(m)));
        // the difference lies in the ideal: reducing it gives zero
        prop_assert!(normal_form(&poly.sub(&nf), &p).is_zero());
    }

    #[test]
    fn d4_audits_match(d in prop::collection::vec(-3i64..=3, 4)) {
        let case: CaseName = "D4".parse().unwrap();
        let a = full_equivalence_audit(&case, &MultiDegree(d), &AuditCaps::default()).unwrap();
        prop_assert!(a.ok);
        prop_assert!(a.steps().all(|s| s.outcome == StepOutcome::Match && s.stabilized));
    }
}

/// Brute force over all monomials of total degree at most 8 in D4.
#[test]
fn degree_system_matches_brute_force() {
    let g = extended_degree_matrix(&build_singularity(Family::D, 4).unwrap());
    let k = g.nvars();
    let mut all = Vec::new();
    let mut e = vec![0u32; k];
    loop {
        if e.iter().sum::<u32>() <= 8 {
            all.push(Monomial::new(e.clone()));
        }
        let mut i = 0;
        while i < k && e[i] == 8 {
            e[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        e[i] += 1;
    }
    for d in [vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, 1, 1], vec![-1, 2, 0, 0]] {
        let d = MultiDegree(d);
        let sols = solve_degree_system(&g, &d).unwrap();
        for p in &sols.particular {
            assert_eq!(g.degree_of(p).unwrap(), d);
            assert!(sols.particular.iter().all(|q| q == p || !q.divides(p)), "particular solutions not minimal");
        }
        for r in &sols.recession {
            assert!(g.degree_of(r).unwrap().is_zero());
        }
        for m in all.iter().filter(|m| g.degree_of(m).unwrap() == d) {
            assert!(sols.contains(m), "{d}: missing {}", g.display(m));
        }
    }
}

#[test]
fn presentations_are_homogeneous_of_center_degree() {
    for (f, n) in [(Family::D, 4), (Family::D, 9), (Family::E, 6), (Family::E, 7), (Family::E, 8)] {
        let p = presentation_for_graph(&build_singularity(f, n).unwrap()).unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relation_degree(0), p.grading.unit(0));
    }
}
