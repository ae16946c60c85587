//! End-to-end acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits nonzero only for failures not listed in `DOCUMENTED`.

use std::process::Command;
use std::time::{Duration, Instant};

use coxforge::cox::{pullback_factorization, relation_from_graph};
use coxforge::graph::{build_singularity, build_custom_tree, extended_degree_matrix, CaseName, Family};
use coxforge::invariants::{
    degree_zero_brute_force, degree_zero_hilbert_basis, verify_invariant_table_with_cap, VerificationReport,
};
use coxforge::reduction::{
    base_case_audit, full_equivalence_audit, is_basic, reduce_nef_to_basic, reduce_to_nef, AuditCaps, ExpectedDim,
    StepOutcome, DEFAULT_STEP_CAP,
};
use coxforge::ring::{homogeneous_degree, in_monoid, rational, Monomial, MultiDegree, Polynomial};
use coxforge_cli::verify::grid_cells;
use coxforge_cli::RunConfig;

/// Criteria whose failure is explained in the README.
const DOCUMENTED: &[(u32, &str)] = &[(
    4,
    "the printed E6 table swaps x3^3 and x5^3 between Z3 and Z4; those entries have nonzero degree, \
     so they cannot be invariants. The computed basis matches the corrected table",
)];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table(f: Family, n: usize, cap: u32) -> Result<VerificationReport, String> {
    verify_invariant_table_with_cap(f, n, cap).map_err(|e| format!("{f}{n}: {e}"))
}

fn shape(r: &VerificationReport, gens: usize, rels: usize) -> Result<(), String> {
    ensure(r.ok && r.generators.len() == gens && r.relations.len() == rels, || {
        format!("{}: ok={} with {} generators, {} relations", r.case, r.ok, r.generators.len(), r.relations.len())
    })
}

fn c1() -> Check {
    for n in 1..=8 {
        let r = table(Family::A, n, n as u32 + 2)?;
        shape(&r, 3, 1)?;
    }
    Ok("A1-A8: 3 generators, Z1*Z2 = W^(n+1) only".into())
}

fn c2() -> Check {
    for n in [4, 6, 8, 10, 12] {
        shape(&table(Family::D, n, 4)?, 4, 1)?;
    }
    Ok("D4, D6, D8, D10, D12: 4 generators, W^2 = Z1*Z2*Z3 only".into())
}

fn c3() -> Check {
    for n in [5, 7, 9, 11] {
        shape(&table(Family::D, n, 5)?, 6, 6)?;
    }
    Ok("D5, D7, D9, D11: 6 generators, six relations".into())
}

fn c4() -> Check {
    let e6 = table(Family::E, 6, 8)?;
    let e7 = table(Family::E, 7, 8)?;
    let e8 = table(Family::E, 8, 8)?;
    shape(&e7, 4, 1)?;
    ensure(e7.matches_printed, || "E7 differs from the printed table".into())?;
    ensure(e8.ok && e8.matches_printed && e8.generators.len() == 3 && e8.relations.is_empty(), || {
        format!("E8: {} generators, {} relations", e8.generators.len(), e8.relations.len())
    })?;
    shape(&e6, 4, 1)?;
    let fixed: Vec<String> = e6.errata.iter().map(|e| e.generator.clone()).collect();
    ensure(e6.matches_printed, || {
        format!(
            "E6 verbatim: printed {} have nonzero degree; corrected table matches (4 gens, Z2^3 = Z3*Z4); E7, E8 exact",
            fixed.join(", ")
        )
    })?;
    Ok("E6, E7, E8 exact".into())
}

/// Each branch b_1..b_L (from the center outward) contributes
/// `y_{b_1} y_{b_2}^2 ... y_{b_L}^L x_{b_L}^(L+1)`.
fn expected_relation(f: Family, n: usize) -> Result<Polynomial, String> {
    let g = build_singularity(f, n).map_err(|e| e.to_string())?;
    let gr = extended_degree_matrix(&g);
    let layout = g.layout().ok_or("no layout")?;
    let mut p = Polynomial::zero();
    for b in &layout.branches {
        let mut m = Monomial::one(gr.nvars());
        for (j, v) in b.iter().enumerate() {
            m.exponents[gr.var_index(&format!("y{v}")).ok_or("y var")?] += j as u32 + 1;
        }
        let end = b.last().ok_or("empty branch")?;
        m.exponents[gr.var_index(&format!("x{end}")).ok_or("x var")?] += b.len() as u32 + 1;
        p.add_term(m, rational(1));
    }
    Ok(p)
}

fn de_cases() -> Vec<(Family, usize)> {
    let mut v: Vec<_> = (4..=12).map(|n| (Family::D, n)).collect();
    v.extend((6..=8).map(|n| (Family::E, n)));
    v
}

fn c5() -> Check {
    for (f, n) in de_cases() {
        let g = build_singularity(f, n).map_err(|e| e.to_string())?;
        let gr = extended_degree_matrix(&g);
        let rel = relation_from_graph(&g).map_err(|e| e.to_string())?;
        ensure(rel.len() == 1 && rel[0] == expected_relation(f, n)?, || format!("{f}{n}: wrong relation"))?;
        let deg = homogeneous_degree(&rel[0], &gr).map_err(|e| e.to_string())?;
        ensure(deg == Some(gr.unit(0)), || format!("{f}{n}: relation not of degree e0"))?;
    }
    for n in 1..=8 {
        let g = build_singularity(Family::A, n).map_err(|e| e.to_string())?;
        ensure(relation_from_graph(&g).map_err(|e| e.to_string())?.is_empty(), || format!("A{n} has a relation"))?;
    }
    Ok("D4-D12, E6-E8: three-term relation of degree e0; A1-A8: none".into())
}

fn c6() -> Check {
    let mut d4 = String::new();
    for (f, n) in de_cases() {
        let cut = if f == Family::D && n % 2 == 1 { 1 } else { 0 };
        let r = pullback_factorization(f, n, cut).map_err(|e| e.to_string())?;
        let ones = r.residual.len() == 3 && r.residual.terms.values().all(|c| *c == rational(1));
        ensure(r.principal && r.matches_candidate && ones, || format!("{f}{n}: residual {}", r.residual_text))?;
        if (f, n) == (Family::D, 4) {
            d4 = r.common_factor_text.clone();
        }
    }
    ensure(d4 == "y0^2*y1*y2*y3", || format!("D4 common factor {d4}"))?;
    Ok(format!("D4-D12, E6-E8 factor as monomial * relation, coefficients (1,1,1); D4 factor {d4}"))
}

fn c7() -> Check {
    let cfg = RunConfig::default();
    let mut total = 0;
    for name in ["D4", "D5", "E6"] {
        let case: CaseName = name.parse().unwrap();
        let g = case.build().map_err(|e| e.to_string())?;
        let (cells, _) = grid_cells(g.len(), &cfg).map_err(|e| e.to_string())?;
        ensure(cells.len() >= 2000, || format!("{name}: only {} cells", cells.len()))?;
        for d in &cells {
            let t = reduce_to_nef(d, &g, DEFAULT_STEP_CAP).map_err(|e| format!("{name} {d}: {e}"))?;
            let b = reduce_nef_to_basic(&t.terminal, &g, DEFAULT_STEP_CAP).map_err(|e| format!("{name} {d}: {e}"))?;
            ensure(is_basic(&b.terminal, &g), || format!("{name} {d}: terminal {} not basic", b.terminal))?;
            let measured = name.starts_with('D');
            ensure(!measured || (!b.measures.is_empty() && b.measure_non_increasing()), || {
                format!("{name} {d}: S-measure increases")
            })?;
        }
        total += cells.len();
    }
    Ok(format!("{total} sampled cells of [-3,3]^n over D4, D5, E6 terminate in basic degrees; S non-increasing on D"))
}

fn c8() -> Check {
    let cfg = RunConfig::default();
    let caps = AuditCaps { base_k_max: 0, ..AuditCaps::default() };
    let (mut within, mut others) = (0usize, 0usize);
    let mut kinds = std::collections::BTreeMap::<String, usize>::new();
    for name in ["D4", "D5", "D6"] {
        let case: CaseName = name.parse().unwrap();
        let n = case.build().map_err(|e| e.to_string())?.len();
        let (cells, _) = grid_cells(n, &cfg).map_err(|e| e.to_string())?;
        for d in cells.iter().take(150) {
            let a = full_equivalence_audit(&case, d, &caps).map_err(|e| format!("{name} {d}: {e}"))?;
            for s in a.steps() {
                let (StepOutcome::Match | StepOutcome::Mismatch) = s.outcome else {
                    return Err(format!("{name} {d}: {} step not audited: {:?}", s.kind, s.outcome));
                };
                ensure(s.stabilized && s.outcome == StepOutcome::Match, || {
                    format!("{name} {d}: {} {:?} expected {:?} actual {:?}", s.kind, s.curves, s.expected_dim, s.actual_dim)
                })?;
                if s.cap.is_some_and(|c| c <= 24) {
                    within += 1;
                    *kinds.entry(s.kind.clone()).or_default() += 1;
                } else {
                    others += 1;
                }
            }
        }
    }
    ensure(within >= 200, || format!("only {within} steps within cap 24"))?;
    let by: Vec<String> = kinds.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!("{within} steps within cap 24 ({}), plus {others} larger, all equal to expected", by.join(", ")))
}

fn c9() -> Check {
    let mut count = 0;
    for n in 4..=6 {
        for leaf in [1, 2, n - 1] {
            for k in 1..=3 {
                let r = base_case_audit(Family::D, n, leaf, k, 3).map_err(|e| e.to_string())?;
                ensure(r.matches && r.degrees_ok, || format!("D{n} leaf {leaf} k {k}: {:?} vs {:?}", r.enumerated, r.expected_reduced))?;
                count += 1;
            }
        }
    }
    let r = base_case_audit(Family::D, 4, 1, 1, 3).map_err(|e| e.to_string())?;
    ensure(r.seed == "x2*x3*y0*y2*y3", || format!("D4 leaf 1 seed {}", r.seed))?;
    Ok(format!("{count} base cases equal seed * period^a (a <= 3); D4 leaf 1 seed {}", r.seed))
}

fn c10() -> Check {
    let case: CaseName = "custom:2,2,3".parse().unwrap();
    let g = build_custom_tree(&[2, 2, 3]).map_err(|e| e.to_string())?;
    let d = MultiDegree::unit(g.len(), 7).scaled(2);
    let a = full_equivalence_audit(&case, &d, &AuditCaps::default()).map_err(|e| e.to_string())?;
    let s = a.first_mismatch().ok_or("no mismatch")?;
    ensure(
        s.kind == "AddCurve" && s.curves == [7] && s.expected_dim == ExpectedDim::Value(1) && s.actual_dim == Some(0),
        || format!("first mismatch {s:?}"),
    )?;
    let out = Command::new(env!("CARGO_BIN_EXE_coxforge"))
        .args(["verify", "--case", "custom:2,2,3"])
        .output()
        .map_err(|e| e.to_string())?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure(code == Some(0) && json["status"] == "rule-fails-as-predicted", || {
        format!("CLI exit {code:?}, status {}", json["status"])
    })?;
    Ok("AddCurve(E7) from 2e7: actual 0, expected 1; CLI verify: rule-fails-as-predicted, exit 0".into())
}

fn c11() -> Check {
    let mut cases: Vec<(Family, usize)> = (1..=8).map(|n| (Family::A, n)).collect();
    cases.extend(de_cases());
    let mut checked = 0;
    for (f, n) in cases {
        let graph = build_singularity(f, n).map_err(|e| e.to_string())?;
        let hb = degree_zero_hilbert_basis(&extended_degree_matrix(&graph)).map_err(|e| e.to_string())?;
        let small = degree_zero_brute_force(&graph, 20).map_err(|e| e.to_string())?;
        for m in &small {
            ensure(in_monoid(m, &hb), || format!("{f}{n}: brute-force monomial outside the basis monoid"))?;
        }
        for (i, b) in hb.iter().enumerate() {
            let rest: Vec<Monomial> = hb.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| m.clone()).collect();
            ensure(!in_monoid(b, &rest), || format!("{f}{n}: basis element decomposes"))?;
        }
        checked += small.len();
    }
    Ok(format!("{checked} degree-zero monomials (coordinate sum <= 20) decompose; all bases minimal"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Check); 11] = [
        (1, "A-type invariants", Duration::from_secs(5), c1),
        (2, "D-even invariants", Duration::from_secs(30), c2),
        (3, "D-odd invariants", Duration::from_secs(60), c3),
        (4, "E-type invariants (verbatim table)", Duration::from_secs(30), c4),
        (5, "candidate relations", Duration::from_secs(60), c5),
        (6, "pull-back factorization", Duration::from_secs(10), c6),
        (7, "reduction termination", Duration::from_secs(300), c7),
        (8, "cokernel audits", Duration::from_secs(600), c8),
        (9, "base cases", Duration::from_secs(60), c9),
        (10, "counterexample", Duration::from_secs(60), c10),
        (11, "Hilbert-basis oracle", Duration::from_secs(300), c11),
    ];
    let mut undocumented = 0;
    for (id, name, budget, run) in criteria {
        let t = Instant::now();
        let mut r = run();
        let el = t.elapsed();
        if r.is_ok() && el > budget {
            r = Err(format!("took {el:.1?}, budget {budget:?}"));
        }
        match r {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{el:.2?}]"),
            Err(msg) => match DOCUMENTED.iter().find(|(d, _)| *d == id) {
                Some((_, why)) => println!("criterion {id:>2} FAIL  {name}: {msg} [{el:.2?}] (documented: {why})"),
                None => {
                    undocumented += 1;
                    println!("criterion {id:>2} FAIL  {name}: {msg} [{el:.2?}]");
                }
            },
        }
    }
    if undocumented > 0 {
        std::process::exit(1);
    }
}
