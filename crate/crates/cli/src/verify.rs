//! `verify` and `report`: invariants, factorization, base cases and
//! reduction audits over a degree grid, folded into one report per case.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use coxforge::error::CoxError;
use coxforge::graph::{CaseName, Family};
use coxforge::invariants::VerificationReport;
use coxforge::reduction::{
    base_case_audit, basic_target, full_equivalence_audit, BaseCaseReport, EquivalenceAudit, ExpectedDim,
    StepOutcome,
};
use coxforge::ring::MultiDegree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{audit_text, cox_section, invariants_report, CoxSection};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Mismatch,
    /// The audit fails exactly where the rule is predicted to break.
    RuleFailsAsPredicted,
    /// Every failure is a reduction that hit the step cap.
    ResourceCap,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::RuleFailsAsPredicted => 0,
            Status::Mismatch => 1,
            Status::ResourceCap => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub min: i64,
    pub max: i64,
    pub total_cells: u128,
    pub sampled: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellFailure {
    pub degree: MultiDegree,
    pub reason: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct StepTally {
    pub steps: u64,
    pub matched: u64,
    pub mismatched: u64,
    pub unaudited: u64,
    pub beyond_cap: u64,
    pub stabilized: u64,
}

impl StepTally {
    pub fn add(&mut self, a: &EquivalenceAudit) {
        for s in a.steps() {
            self.steps += 1;
            self.stabilized += u64::from(s.stabilized);
            match s.outcome {
                StepOutcome::Match => self.matched += 1,
                StepOutcome::Mismatch => self.mismatched += 1,
                StepOutcome::Unaudited { .. } => self.unaudited += 1,
                StepOutcome::BeyondCap { .. } => self.beyond_cap += 1,
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub cells: usize,
    pub tally: StepTally,
    pub nonterminated: usize,
    pub measure_violations: usize,
    /// First failing cells, in grid order.
    pub failures: Vec<CellFailure>,
    /// Audits of designated degrees (the predicted failure on custom trees).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<EquivalenceAudit>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseCaseSection {
    pub reports: Vec<BaseCaseReport>,
    /// Exactly one quotient basis monomial per vanishing order everywhere.
    pub one_per_exponent: bool,
    /// Every basis equals `seed * period^a`.
    pub geometric_match: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sections {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<VerificationReport>,
    pub cox: CoxSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_cases: Option<BaseCaseSection>,
    pub reduction: ReductionSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub case: String,
    pub config: RunConfig,
    pub sections: Sections,
    pub status: Status,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

const MAX_LISTED_FAILURES: usize = 20;

/// Cells of `[min, max]^n` in lexicographic order, or a seeded sample of
/// `max_cells` of them (sorted) when the box is larger.
pub fn grid_cells(n: usize, cfg: &RunConfig) -> CliResult<(Vec<MultiDegree>, GridSpec)> {
    let side = u128::try_from(cfg.grid_max - cfg.grid_min + 1).expect("validated grid");
    let total = side.checked_pow(u32::try_from(n).unwrap_or(u32::MAX)).unwrap_or(u128::MAX);
    let sampled = total > cfg.max_cells as u128;
    let indices: Vec<u128> = if sampled {
        let total_usize = usize::try_from(total).map_err(|_| CliError::usage("grid too large to sample"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut v: Vec<u128> = rand::seq::index::sample(&mut rng, total_usize, cfg.max_cells)
            .into_iter()
            .map(|i| i as u128)
            .collect();
        v.sort_unstable();
        v
    } else {
        (0..total).collect()
    };
    let cells = indices
        .into_iter()
        .map(|mut idx| {
            let mut d = vec![0i64; n];
            for x in d.iter_mut().rev() {
                *x = cfg.grid_min + i64::try_from(idx % side).expect("digit fits");
                idx /= side;
            }
            MultiDegree(d)
        })
        .collect();
    Ok((cells, GridSpec { min: cfg.grid_min, max: cfg.grid_max, total_cells: total, sampled, seed: cfg.seed }))
}

fn failure_reason(a: &EquivalenceAudit) -> String {
    if let Some(s) = a.first_mismatch() {
        let exp = serde_json::to_value(&s.expected_dim).map(|v| v.to_string()).unwrap_or_default();
        return format!(
            "{} {:?} -> {}: expected {exp}, actual {}",
            s.kind,
            s.curves,
            s.degree_after,
            s.actual_dim.map_or("-".into(), |v| v.to_string())
        );
    }
    if !a.to_nef.terminated || a.to_basic.as_ref().is_some_and(|t| !t.terminated) {
        return "reduction did not terminate within the step cap".into();
    }
    if a.measure_ok == Some(false) {
        return "S-measure increased".into();
    }
    "base case has other than one monomial per exponent".into()
}

fn fold(cells: &[MultiDegree], audits: Vec<EquivalenceAudit>) -> ReductionSection {
    let mut r = ReductionSection {
        grid: None,
        cells: cells.len(),
        tally: StepTally::default(),
        nonterminated: 0,
        measure_violations: 0,
        failures: vec![],
        probes: vec![],
        ok: true,
    };
    for a in &audits {
        r.tally.add(a);
        if !a.to_nef.terminated || a.to_basic.as_ref().is_some_and(|t| !t.terminated) {
            r.nonterminated += 1;
        }
        r.measure_violations += usize::from(a.measure_ok == Some(false));
        if !a.ok {
            r.ok = false;
            if r.failures.len() < MAX_LISTED_FAILURES {
                r.failures.push(CellFailure { degree: a.initial.clone(), reason: failure_reason(a) });
            }
        }
    }
    r
}

/// Audits every cell in parallel; results keep grid order.
pub fn audit_grid(case: &CaseName, cells: &[MultiDegree], cfg: &RunConfig) -> CliResult<ReductionSection> {
    let mut caps = cfg.audit_caps();
    // base cases get their own section
    caps.base_k_max = 0;
    let audits: Vec<EquivalenceAudit> = cells
        .par_iter()
        .map(|d| full_equivalence_audit(case, d, &caps))
        .collect::<Result<_, CoxError>>()?;
    Ok(fold(cells, audits))
}

pub fn base_case_section(n: usize, cfg: &RunConfig) -> CliResult<BaseCaseSection> {
    let jobs: Vec<(usize, u32)> =
        [1, 2, n - 1].into_iter().flat_map(|leaf| (1..=cfg.base_k_max).map(move |k| (leaf, k))).collect();
    let reports: Vec<BaseCaseReport> = jobs
        .par_iter()
        .map(|&(leaf, k)| base_case_audit(Family::D, n, leaf, k, cfg.base_a_max))
        .collect::<Result<_, CoxError>>()?;
    let one = reports.iter().all(|r| r.one_per_exponent && r.degrees_ok);
    let geo = reports.iter().all(|r| r.matches);
    Ok(BaseCaseSection { reports, one_per_exponent: one, geometric_match: geo, ok: one && geo })
}

/// Degree `2 e_t` at the end `t` of the longest branch, where the curve
/// addition rule is predicted to break on trees outside the ADE list.
pub fn probe_degree(case: &CaseName) -> CliResult<(usize, MultiDegree)> {
    let g = case.build()?;
    let layout = g.layout().ok_or_else(|| CliError::usage(format!("{case} is not star shaped")))?;
    let from = layout.center.unwrap_or(g.nodes[0]);
    let t = basic_target(&g, from)?;
    Ok((t, MultiDegree::unit(g.len(), g.index_of(t).expect("node")).scaled(2)))
}

/// First mismatch is the curve addition at `node`, with a smaller cokernel
/// than the rule asserts.
fn fails_as_predicted(a: &EquivalenceAudit, node: usize) -> bool {
    a.first_mismatch().is_some_and(|s| {
        s.kind == "AddCurve"
            && s.curves == [node]
            && matches!((s.actual_dim, &s.expected_dim), (Some(x), ExpectedDim::Value(e)) if x < *e)
    })
}

pub fn run_verify(case: &CaseName, cfg: &RunConfig, timings: bool) -> CliResult<RunReport> {
    let mut times = BTreeMap::new();
    let mut clock = |name: &str, t: Instant| {
        times.insert(name.to_string(), u64::try_from(t.elapsed().as_millis()).unwrap_or(u64::MAX));
    };
    let g = case.build()?;
    let fam = case.family();

    let t = Instant::now();
    let invariants = fam.map(|_| invariants_report(case, None)).transpose()?;
    clock("invariants", t);

    let t = Instant::now();
    let cox = cox_section(case)?;
    clock("cox", t);

    let t = Instant::now();
    let base_cases = match fam {
        Some((Family::D, n)) if cfg.base_k_max > 0 => Some(base_case_section(n, cfg)?),
        _ => None,
    };
    clock("base_cases", t);

    let t = Instant::now();
    let (reduction, status) = if fam.is_some() {
        let (cells, grid) = grid_cells(g.len(), cfg)?;
        let mut r = audit_grid(case, &cells, cfg)?;
        r.grid = Some(grid);
        let others_ok = invariants.as_ref().is_none_or(|i| i.ok) && cox.ok && base_cases.as_ref().is_none_or(|b| b.ok);
        let status = if r.ok && others_ok {
            Status::Ok
        } else if others_ok && r.tally.mismatched == 0 && r.measure_violations == 0 && r.nonterminated > 0 {
            Status::ResourceCap
        } else {
            Status::Mismatch
        };
        (r, status)
    } else {
        // Outside the ADE list the form is indefinite and the reductions
        // need not terminate, so only the designated degree is audited.
        let (node, d) = probe_degree(case)?;
        let a = full_equivalence_audit(case, &d, &cfg.audit_caps())?;
        let status = if a.ok {
            Status::Ok
        } else if fails_as_predicted(&a, node) {
            Status::RuleFailsAsPredicted
        } else {
            Status::Mismatch
        };
        let mut r = fold(std::slice::from_ref(&d), vec![a.clone()]);
        r.probes.push(a);
        (r, status)
    };
    clock("reduction", t);

    Ok(RunReport {
        case: case.to_string(),
        config: cfg.clone(),
        ok: matches!(status, Status::Ok | Status::RuleFailsAsPredicted),
        status,
        sections: Sections { invariants, cox, base_cases, reduction },
        timings_ms: timings.then_some(times),
    })
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Mismatch => "MISMATCH",
        Status::RuleFailsAsPredicted => "rule-fails-as-predicted",
        Status::ResourceCap => "RESOURCE CAP",
    }
}

pub fn run_report_text(r: &RunReport) -> String {
    let s = &r.sections;
    let mut t = format!("{}: {}\n", r.case, status_word(r.status));
    if let Some(i) = &s.invariants {
        let _ = writeln!(
            t,
            "  invariants: {} generators, {} relations, {}{}",
            i.generators.len(),
            i.relations.len(),
            if i.ok { "ok" } else { "MISMATCH" },
            if i.errata.is_empty() { String::new() } else { format!(" ({} reference entries corrected)", i.errata.len()) }
        );
    }
    let principal = s.cox.factorizations.iter().find(|f| f.principal);
    let _ = writeln!(
        t,
        "  cox: {} relation(s){}, {}",
        s.cox.relations.len(),
        principal.map_or(String::new(), |f| format!(", principal cut factor {}", f.common_factor_text)),
        if s.cox.ok { "ok" } else { "MISMATCH" }
    );
    if let Some(b) = &s.base_cases {
        let _ = writeln!(
            t,
            "  base cases: {} audited, one per exponent: {}, geometric family: {}",
            b.reports.len(),
            b.one_per_exponent,
            b.geometric_match
        );
    }
    let red = &s.reduction;
    let x = &red.tally;
    let _ = writeln!(
        t,
        "  reduction: {} cells{}, {} steps: {} match, {} mismatch, {} unaudited, {} beyond cap",
        red.cells,
        red.grid.as_ref().map_or(String::new(), |g| format!(" of [{},{}]^n", g.min, g.max)),
        x.steps,
        x.matched,
        x.mismatched,
        x.unaudited,
        x.beyond_cap
    );
    for f in &red.failures {
        let _ = writeln!(t, "    {}: {}", f.degree, f.reason);
    }
    for p in &red.probes {
        for line in audit_text(p).lines() {
            let _ = writeln!(t, "  | {line}");
        }
    }
    if let Some(tm) = &r.timings_ms {
        let parts: Vec<String> = tm.iter().map(|(k, v)| format!("{k} {v} ms")).collect();
        let _ = writeln!(t, "  timings: {}", parts.join(", "));
    }
    t
}

pub fn default_report_cases() -> Vec<CaseName> {
    let mut v: Vec<String> = (1..=8).map(|n| format!("A{n}")).collect();
    v.extend((4..=8).map(|n| format!("D{n}")));
    v.extend((6..=8).map(|n| format!("E{n}")));
    v.push("custom:2,2,3".into());
    v.iter().map(|s| s.parse().expect("built-in case")).collect()
}
