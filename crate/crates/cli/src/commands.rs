//! Single-case commands: `graph`, `invariants`, `cox`, `reduce`.

use std::fmt::Write as _;

use coxforge::cox::{
    a_quotient_relation_vanishes, all_factorizations, ambient_model, presentation_for_graph, FactorizationResult,
};
use coxforge::graph::{
    extended_degree_matrix, intersection_matrix, is_negative_definite, CaseName, Family, IntegerMatrix,
};
use coxforge::invariants::{verify_invariant_table, verify_invariant_table_with_cap, VerificationReport};
use coxforge::reduction::{full_equivalence_audit, AuditedTrace, EquivalenceAudit, StepOutcome};
use coxforge::ring::MultiDegree;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ade, RunConfig};
use crate::error::CliResult;

/// What a command prints and how the process should exit.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

fn matrix_rows(m: &IntegerMatrix) -> Value {
    json!(m.entries)
}

pub fn cmd_graph(case: &CaseName) -> CliResult<CommandOutput> {
    let g = case.build()?;
    let im = intersection_matrix(&g);
    let ext = extended_degree_matrix(&g);
    let definite = is_negative_definite(&im)?;
    let json = json!({
        "case": case.to_string(),
        "graph": g.to_json(),
        "intersection_matrix": matrix_rows(&im),
        "extended_degree_matrix": { "variables": ext.variables, "rows": matrix_rows(&ext.degree_matrix) },
        "negative_definite": definite,
        "reduction_order": g.reduction_order(),
    });
    let mut text = format!("{case}: {} nodes, {} edges, negative definite: {definite}\n", g.len(), g.edges.len());
    for row in &im.entries {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        let _ = writeln!(text, "  {}", cells.join(""));
    }
    let _ = writeln!(text, "variables: {}", ext.variables.join(" "));
    Ok(CommandOutput { json, text, ok: true })
}

pub fn invariants_report(case: &CaseName, cap: Option<u32>) -> CliResult<VerificationReport> {
    let (f, n) = ade(case)?;
    Ok(match cap {
        Some(c) => verify_invariant_table_with_cap(f, n, c)?,
        None => verify_invariant_table(f, n)?,
    })
}

pub fn invariants_text(r: &VerificationReport) -> String {
    let mut t = format!(
        "{}: {} generators, {} relations (cap {}), {}\n",
        r.case,
        r.generators.len(),
        r.relations.len(),
        r.relation_cap,
        if r.ok { "ok" } else { "MISMATCH" }
    );
    for g in &r.generators {
        let shown = g.computed.as_deref().or(g.expected.as_deref()).unwrap_or("-");
        let _ = writeln!(t, "  {} = {} {}", g.name, shown, if g.matches { "" } else { "(mismatch)" });
    }
    for rel in &r.relations {
        let shown = rel.computed.as_deref().or(rel.expected.as_deref()).unwrap_or("-");
        let _ = writeln!(t, "  {} {}", shown, if rel.matches { "" } else { "(mismatch)" });
    }
    for e in &r.errata {
        let _ = writeln!(t, "  erratum {}: printed {} corrected to {} ({})", e.generator, e.printed, e.corrected, e.note);
    }
    t
}

pub fn cmd_invariants(case: &CaseName, cap: Option<u32>) -> CliResult<CommandOutput> {
    let r = invariants_report(case, cap)?;
    Ok(CommandOutput { text: invariants_text(&r), ok: r.ok, json: serde_json::to_value(&r)? })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoxSection {
    pub relations: Vec<String>,
    pub relation_degree: Option<MultiDegree>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub quotient_relations: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub factorizations: Vec<FactorizationResult>,
    /// Type A: the quotient relation pulls back to zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pullback_vanishes: Option<bool>,
    pub ok: bool,
}

pub fn cox_section(case: &CaseName) -> CliResult<CoxSection> {
    let g = case.build()?;
    let pres = presentation_for_graph(&g)?;
    let vars = &pres.grading.variables;
    let relations: Vec<String> = pres.relations.iter().map(|f| f.display(vars)).collect();
    let relation_degree = (!pres.relations.is_empty()).then(|| pres.relation_degree(0));
    let mut s = CoxSection {
        relations,
        relation_degree,
        generators: vec![],
        quotient_relations: vec![],
        factorizations: vec![],
        pullback_vanishes: None,
        ok: true,
    };
    let Some((f, n)) = case.family() else {
        return Ok(s);
    };
    let model = ambient_model(f, n)?;
    let names = model.generator_names();
    s.generators = model
        .generator_ring
        .iter()
        .map(|x| format!("{} = {}", x.name, pres.grading.display(&x.monomial)))
        .collect();
    s.quotient_relations = model.quotient_relations.iter().map(|r| r.display(&names)).collect();
    if f == Family::A {
        let v = a_quotient_relation_vanishes(n)?;
        s.pullback_vanishes = Some(v);
        s.ok = v && s.relations.is_empty();
    } else {
        s.factorizations = all_factorizations(f, n)?;
        s.ok = s.factorizations.iter().filter(|r| r.principal).all(|r| r.matches_candidate)
            && s.factorizations.iter().any(|r| r.principal);
    }
    Ok(s)
}

pub fn cox_text(case: &CaseName, s: &CoxSection) -> String {
    let mut t = format!("{case}: {}\n", if s.ok { "ok" } else { "MISMATCH" });
    if s.relations.is_empty() {
        let _ = writeln!(t, "  no relation (polynomial ring)");
    }
    for r in &s.relations {
        let _ = writeln!(t, "  relation: {r} = 0");
    }
    for q in &s.quotient_relations {
        let _ = writeln!(t, "  invariant relation: {q}");
    }
    for f in &s.factorizations {
        let _ = writeln!(
            t,
            "  cut {}{}: {} -> ({}) * ({}){}",
            f.cut_index,
            if f.principal { " (principal)" } else { "" },
            f.cut,
            f.common_factor_text,
            f.residual_text,
            if f.matches_candidate { "  [candidate]" } else { "" }
        );
    }
    if let Some(v) = s.pullback_vanishes {
        let _ = writeln!(t, "  invariant relation pulls back to zero: {v}");
    }
    t
}

pub fn cmd_cox(case: &CaseName) -> CliResult<CommandOutput> {
    let s = cox_section(case)?;
    let mut json = serde_json::to_value(&s)?;
    json["case"] = json!(case.to_string());
    Ok(CommandOutput { text: cox_text(case, &s), ok: s.ok, json })
}

fn outcome_text(o: &StepOutcome) -> String {
    match o {
        StepOutcome::Match => "match".into(),
        StepOutcome::Mismatch => "MISMATCH".into(),
        StepOutcome::Unaudited { reason } => format!("unaudited ({reason})"),
        StepOutcome::BeyondCap { message } => format!("beyond cap ({message})"),
    }
}

fn trace_text(t: &mut String, label: &str, tr: &AuditedTrace) {
    let _ = writeln!(t, "  {label}: {} -> {} in {} steps", tr.initial, tr.terminal, tr.steps.len());
    for s in &tr.steps {
        let actual = s.actual_dim.map_or("-".into(), |v| v.to_string());
        let expected = serde_json::to_value(&s.expected_dim).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            t,
            "    {:<13} {:?} -> {}  expected {expected} actual {actual}  {}",
            s.kind,
            s.curves,
            s.degree_after,
            outcome_text(&s.outcome)
        );
    }
    if !tr.terminated {
        let _ = writeln!(t, "    did not terminate within the step cap");
    }
}

pub fn audit_text(a: &EquivalenceAudit) -> String {
    let mut t = format!("{} from {}: {}\n", a.case, a.initial, if a.ok { "ok" } else { "FAILED" });
    trace_text(&mut t, "to nef", &a.to_nef);
    if let Some(b) = &a.to_basic {
        trace_text(&mut t, "to basic", b);
    }
    if let Some(m) = a.measure_ok {
        let _ = writeln!(t, "  S-measure non-increasing: {m}");
    }
    if let Some(b) = &a.base_case {
        let _ = writeln!(
            t,
            "  base case leaf {} k {}: seed {} period {}, one per exponent: {}, geometric: {}",
            b.leaf, b.k, b.seed, b.period, b.one_per_exponent, b.matches
        );
    }
    if let Some(n) = &a.base_case_note {
        let _ = writeln!(t, "  base case: {n}");
    }
    t
}

/// Also reports whether both reductions finished within the step cap.
pub fn cmd_reduce(case: &CaseName, d: &MultiDegree, cfg: &RunConfig) -> CliResult<(CommandOutput, bool)> {
    let a = full_equivalence_audit(case, d, &cfg.audit_caps())?;
    let terminated = a.to_nef.terminated && a.to_basic.as_ref().is_some_and(|t| t.terminated);
    Ok((CommandOutput { text: audit_text(&a), ok: a.ok, json: serde_json::to_value(&a)? }, terminated))
}
