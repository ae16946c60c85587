//! Candidate Cox-ring presentations read off the dual graph, the ambient
//! quotient models cut out by the reference equations, and the pull-back
//! factorization linking the two.

use serde::Serialize;

use crate::error::{CoxError, Result};
use crate::golden::{golden_table, GoldenTable};
use crate::graph::{build_singularity, extended_degree_matrix, Family, ResolutionGraph};
use crate::invariants::{
    default_relation_cap, degree_zero_hilbert_basis, toric_relations, BinomialRelation, InvariantGenerator,
};
use crate::ring::{Grading, Monomial, Polynomial, RingPresentation};

/// The graph rule: for every branch of the unique trivalent node, the
/// product of `y` at distance `t` raised to `t`, times the branch's leaf
/// variable raised to (branch length + 1). Chains give no relation.
pub fn relation_from_graph(g: &ResolutionGraph) -> Result<Vec<Polynomial>> {
    Ok(relation_with_leading(g)?.into_iter().map(|(f, _)| f).collect())
}

fn relation_with_leading(g: &ResolutionGraph) -> Result<Option<(Polynomial, Monomial)>> {
    if let Some(&v) = g.nodes.iter().find(|&&v| g.valence(v) >= 4) {
        return Err(CoxError::UnsupportedGraph(format!("node {v} has valence {}", g.valence(v))));
    }
    let trivalent = g.nodes.iter().filter(|&&v| g.valence(v) == 3).count();
    if trivalent > 1 {
        return Err(CoxError::UnsupportedGraph(format!("{trivalent} nodes of valence 3")));
    }
    if trivalent == 0 {
        return Ok(None);
    }
    let layout = g
        .layout()
        .ok_or_else(|| CoxError::UnsupportedGraph("tree is not star shaped".into()))?;
    let grading = extended_degree_matrix(g);
    let n = grading.nvars();
    let mut terms = Vec::new();
    for branch in &layout.branches {
        let mut m = Monomial::one(n);
        for (t, &node) in branch.iter().enumerate() {
            let y = grading.var_index(&format!("y{node}")).expect("every node has a y variable");
            m.exponents[y] = t as u32 + 1;
        }
        let end = *branch.last().expect("branches are nonempty");
        let leaf = g
            .leaf_variables
            .iter()
            .find(|l| l.node == end)
            .ok_or_else(|| CoxError::UnsupportedGraph(format!("branch end {end} has no leaf variable")))?;
        let x = grading.var_index(&leaf.name).expect("leaf variable is graded");
        m.exponents[x] = branch.len() as u32 + 1;
        terms.push((branch.len(), branch[0], m));
    }
    let lead = terms.iter().min_by_key(|(len, first, _)| (*len, *first)).map(|t| t.2.clone()).expect("three branches");
    Ok(Some((Polynomial::sum_of(terms.into_iter().map(|t| t.2)), lead)))
}

/// Grading from the extended degree matrix plus the graph-rule relation.
pub fn presentation_for_graph(g: &ResolutionGraph) -> Result<RingPresentation> {
    let grading = extended_degree_matrix(g);
    match relation_with_leading(g)? {
        None => Ok(RingPresentation::free(grading)),
        Some((f, lm)) => RingPresentation::new(grading, vec![f], vec![lm]),
    }
}

pub fn candidate_presentation(family: Family, n: usize) -> Result<RingPresentation> {
    presentation_for_graph(&build_singularity(family, n)?)
}

/// Quotient of the invariant ring's ambient space by the cut equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbientModel {
    pub case: String,
    pub generator_ring: Vec<InvariantGenerator>,
    pub quotient_relations: Vec<BinomialRelation>,
    /// Polynomials over the generators, exponents in `generator_ring` order.
    pub cut_equations: Vec<Polynomial>,
    pub principal_cut: Option<usize>,
}

impl AmbientModel {
    pub fn generator_names(&self) -> Vec<String> {
        self.generator_ring.iter().map(|g| g.name.clone()).collect()
    }
}

fn reference(family: Family, n: usize) -> Result<(Grading, GoldenTable)> {
    let g = extended_degree_matrix(&build_singularity(family, n)?);
    let t = golden_table(family, n, &g)?;
    Ok((g, t))
}

/// Generators are the computed degree-zero basis, checked against and
/// ordered like the reference table.
pub fn ambient_model(family: Family, n: usize) -> Result<AmbientModel> {
    let (g, table) = reference(family, n)?;
    let computed = degree_zero_hilbert_basis(&g)?;
    if computed.len() != table.generators.len() || table.generators.iter().any(|(_, m)| !computed.contains(m)) {
        return Err(CoxError::Internal(format!("{family}{n}: computed invariants differ from the reference table")));
    }
    let generator_ring: Vec<InvariantGenerator> = table
        .generators
        .iter()
        .map(|(name, m)| InvariantGenerator { name: name.clone(), monomial: m.clone() })
        .collect();
    let quotient_relations = toric_relations(&generator_ring, default_relation_cap(family, n));
    Ok(AmbientModel {
        case: format!("{family}{n}"),
        generator_ring,
        quotient_relations,
        cut_equations: table.cuts,
        principal_cut: table.principal_cut,
    })
}

/// Replaces each generator variable by its ring monomial.
pub fn substitute_polynomial(p: &Polynomial, gens: &[InvariantGenerator]) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in &p.terms {
        out.add_term(crate::invariants::substitute(&m.exponents, gens), c.clone());
    }
    out
}

/// The relation `Z1*Z2 - W^(n+1)` over `[z1, z2, w]` as a polynomial.
pub fn a_quotient_polynomial(n: usize) -> Polynomial {
    let np = u32::try_from(n + 1).unwrap_or(u32::MAX);
    Polynomial::from_monomial(Monomial::new(vec![1, 1, 0])).sub(&Polynomial::from_monomial(Monomial::new(vec![0, 0, np])))
}

/// Whether `Z1*Z2 - W^(n+1)` vanishes after substituting the A_n invariants.
pub fn a_quotient_relation_vanishes(n: usize) -> Result<bool> {
    let (_, table) = reference(Family::A, n)?;
    let gens: Vec<InvariantGenerator> = table
        .generators
        .iter()
        .map(|(name, m)| InvariantGenerator { name: name.clone(), monomial: m.clone() })
        .collect();
    Ok(substitute_polynomial(&a_quotient_polynomial(n), &gens).is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    pub cut_index: usize,
    pub principal: bool,
    pub cut: String,
    pub common_factor: Monomial,
    pub residual: Polynomial,
    pub common_factor_text: String,
    pub residual_text: String,
    pub matches_candidate: bool,
}

/// Substitutes the generators into a cut equation and splits off the
/// monomial GCD of the resulting terms.
pub fn pullback_factorization(family: Family, n: usize, cut_index: usize) -> Result<FactorizationResult> {
    let (g, table) = reference(family, n)?;
    let cut = table
        .cuts
        .get(cut_index)
        .ok_or_else(|| CoxError::param(format!("{family}{n} has {} cut equations", table.cuts.len())))?;
    let gens: Vec<InvariantGenerator> = table
        .generators
        .iter()
        .map(|(name, m)| InvariantGenerator { name: name.clone(), monomial: m.clone() })
        .collect();
    let substituted = substitute_polynomial(cut, &gens);
    let common_factor = substituted
        .monomial_gcd()
        .ok_or_else(|| CoxError::Internal("cut equation substitutes to zero".into()))?;
    let residual = substituted.div_monomial(&common_factor).expect("gcd divides every term");
    let candidate = relation_from_graph(&build_singularity(family, n)?)?;
    let matches_candidate = candidate.first().is_some_and(|f| *f == residual);
    Ok(FactorizationResult {
        cut_index,
        principal: table.principal_cut == Some(cut_index),
        cut: cut.display(&table.names()),
        common_factor_text: g.display(&common_factor),
        residual_text: residual.display(&g.variables),
        common_factor,
        residual,
        matches_candidate,
    })
}

/// Factorizations of every cut equation of a case, in cut order.
pub fn all_factorizations(family: Family, n: usize) -> Result<Vec<FactorizationResult>> {
    let (_, table) = reference(family, n)?;
    (0..table.cuts.len()).map(|i| pullback_factorization(family, n, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_custom_tree;

    fn shown(g: &ResolutionGraph) -> Vec<String> {
        let gr = extended_degree_matrix(g);
        relation_from_graph(g).unwrap().iter().map(|f| f.display(&gr.variables)).collect()
    }

    #[test]
    fn graph_rule_examples() {
        assert_eq!(shown(&build_singularity(Family::D, 4).unwrap()), vec!["x1^2*y1 + x2^2*y2 + x3^2*y3"]);
        assert_eq!(
            shown(&build_singularity(Family::E, 7).unwrap()),
            vec!["x6^4*y4*y5^2*y6^3 + x3^3*y2*y3^2 + x1^2*y1"]
        );
        assert!(shown(&build_singularity(Family::A, 3).unwrap()).is_empty());
        assert_eq!(
            shown(&build_custom_tree(&[2, 2, 3]).unwrap()),
            vec!["x7^4*y5*y6^2*y7^3 + x2^3*y1*y2^2 + x4^3*y3*y4^2"]
        );
        assert!(matches!(relation_from_graph(&build_custom_tree(&[1, 1, 1, 1]).unwrap()), Err(CoxError::UnsupportedGraph(_))));
    }

    #[test]
    fn candidate_degree_is_e0() {
        for (f, n) in [(Family::D, 4), (Family::D, 9), (Family::E, 6), (Family::E, 8)] {
            let p = candidate_presentation(f, n).unwrap();
            assert_eq!(p.relation_degree(0), p.grading.unit(0));
        }
        assert!(candidate_presentation(Family::A, 2).unwrap().relations.is_empty());
    }

    #[test]
    fn factorization_d4_e8() {
        let r = pullback_factorization(Family::D, 4, 0).unwrap();
        assert_eq!(r.common_factor_text, "y0^2*y1*y2*y3");
        assert!(r.matches_candidate && r.principal);
        let e8 = pullback_factorization(Family::E, 8, 0).unwrap();
        assert_eq!(e8.common_factor_text, "y0^30*y1^15*y2^20*y3^10*y4^24*y5^18*y6^12*y7^6");
        assert!(e8.matches_candidate);
        let d5 = pullback_factorization(Family::D, 5, 1).unwrap();
        assert!(d5.matches_candidate && d5.principal);
        assert!(pullback_factorization(Family::A, 3, 0).is_err());
    }

    #[test]
    fn ambient_models() {
        let d4 = ambient_model(Family::D, 4).unwrap();
        assert_eq!(d4.cut_equations[0].display(&d4.generator_names()), "Z1 + Z2 + Z3");
        assert_eq!(ambient_model(Family::D, 5).unwrap().cut_equations.len(), 3);
        let a = ambient_model(Family::A, 3).unwrap();
        assert!(a.cut_equations.is_empty());
        assert_eq!(a.quotient_relations.len(), 1);
        assert!(a_quotient_relation_vanishes(3).unwrap());
    }
}
