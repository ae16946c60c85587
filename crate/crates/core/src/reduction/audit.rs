use serde::Serialize;

use super::{
    base_case_audit, cokernel_dimension_adaptive, reduce_nef_to_basic, reduce_to_nef, BaseCaseReport, ExpectedDim,
    ReductionTrace, DEFAULT_STEP_CAP, DEFAULT_TRUNCATION_CAP, HARD_TRUNCATION_CAP,
};
use crate::cox::presentation_for_graph;
use crate::error::{CoxError, PartialResult, Result};
use crate::graph::{CaseName, Family, ResolutionGraph};
use crate::ring::{MultiDegree, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditCaps {
    /// First truncation cap tried for each cokernel.
    pub truncation: u64,
    /// Largest truncation cap before a step is reported beyond the cap.
    pub hard_truncation: u64,
    pub step_cap: usize,
    /// Base cases `k * e_leaf` are audited for `k` up to this bound.
    pub base_k_max: u32,
    pub base_a_max: u32,
    /// Propagate resource errors instead of recording them per step.
    pub strict: bool,
}

impl Default for AuditCaps {
    fn default() -> Self {
        Self {
            truncation: DEFAULT_TRUNCATION_CAP,
            hard_truncation: HARD_TRUNCATION_CAP,
            step_cap: DEFAULT_STEP_CAP,
            base_k_max: 3,
            base_a_max: 3,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum StepOutcome {
    Match,
    Mismatch,
    Unaudited { reason: String },
    BeyondCap { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditedStep {
    pub kind: String,
    pub curves: Vec<usize>,
    pub degree_after: MultiDegree,
    pub expected_dim: ExpectedDim,
    pub actual_dim: Option<u64>,
    pub stabilized: bool,
    pub cap: Option<u64>,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditedTrace {
    pub initial: MultiDegree,
    pub steps: Vec<AuditedStep>,
    pub terminal: MultiDegree,
    pub terminated: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceAudit {
    pub case: String,
    pub initial: MultiDegree,
    pub to_nef: AuditedTrace,
    pub to_basic: Option<AuditedTrace>,
    pub base_case: Option<BaseCaseReport>,
    /// Why no base case was audited, when none was.
    pub base_case_note: Option<String>,
    /// S-measure non-increasing before the shift phase (type D only).
    pub measure_ok: Option<bool>,
    pub ok: bool,
}

impl EquivalenceAudit {
    pub fn steps(&self) -> impl Iterator<Item = &AuditedStep> {
        self.to_nef.steps.iter().chain(self.to_basic.iter().flat_map(|t| t.steps.iter()))
    }

    pub fn first_mismatch(&self) -> Option<&AuditedStep> {
        self.steps().find(|s| s.outcome == StepOutcome::Mismatch)
    }
}

fn audit_trace(
    pres: &RingPresentation,
    trace: &ReductionTrace,
    terminated: bool,
    caps: &AuditCaps,
) -> Result<AuditedTrace> {
    let mut steps = Vec::with_capacity(trace.steps.len());
    for s in &trace.steps {
        let mut a = AuditedStep {
            kind: s.kind.name().into(),
            curves: s.kind.curves(),
            degree_after: s.degree_after.clone(),
            expected_dim: s.expected.clone(),
            actual_dim: None,
            stabilized: false,
            cap: None,
            outcome: StepOutcome::Match,
        };
        match &s.expected {
            ExpectedDim::Unaudited(reason) => a.outcome = StepOutcome::Unaudited { reason: reason.clone() },
            ExpectedDim::Value(v) => match cokernel_dimension_adaptive(pres, s, caps.truncation, caps.hard_truncation) {
                Ok(r) => {
                    a.actual_dim = Some(r.value);
                    a.stabilized = r.stabilized;
                    a.cap = Some(r.cap);
                    a.outcome = if r.value == *v { StepOutcome::Match } else { StepOutcome::Mismatch };
                }
                Err(CoxError::Resource { message, partial }) if !caps.strict => {
                    if let Some(PartialResult::Dimension { value, cap }) = partial {
                        a.actual_dim = Some(value);
                        a.cap = Some(cap);
                    }
                    a.outcome = StepOutcome::BeyondCap { message };
                }
                Err(e) => return Err(e),
            },
        }
        steps.push(a);
    }
    let ok = terminated && steps.iter().all(|s| s.outcome != StepOutcome::Mismatch);
    Ok(AuditedTrace { initial: trace.initial.clone(), steps, terminal: trace.terminal.clone(), terminated, ok })
}

fn run(
    f: impl Fn(&MultiDegree, &ResolutionGraph, usize) -> Result<ReductionTrace>,
    d: &MultiDegree,
    g: &ResolutionGraph,
    cap: usize,
) -> Result<(ReductionTrace, bool)> {
    match f(d, g, cap) {
        Ok(t) => Ok((t, true)),
        Err(CoxError::NonTermination { trace, .. }) => Ok((*trace, false)),
        Err(e) => Err(e),
    }
}

/// Reduces `d` to nef, then to a basic degree, auditing every step's
/// cokernel; for type D the basic degree's base case is audited too.
pub fn full_equivalence_audit(case: &CaseName, d: &MultiDegree, caps: &AuditCaps) -> Result<EquivalenceAudit> {
    let g = case.build()?;
    let pres = presentation_for_graph(&g)?;
    let (t1, done1) = run(reduce_to_nef, d, &g, caps.step_cap)?;
    let to_nef = audit_trace(&pres, &t1, done1, caps)?;
    let (to_basic, measure_ok) = if done1 {
        let (t2, done2) = run(reduce_nef_to_basic, &t1.terminal, &g, caps.step_cap)?;
        let m = (!t2.measures.is_empty()).then(|| t2.measure_non_increasing());
        (Some(audit_trace(&pres, &t2, done2, caps)?), m)
    } else {
        (None, None)
    };
    let mut base_case = None;
    let mut base_case_note = None;
    if let Some(t) = to_basic.as_ref().filter(|t| t.terminated) {
        let nz: Vec<usize> = (0..t.terminal.len()).filter(|&i| t.terminal.0[i] != 0).collect();
        match (case.family(), nz.as_slice()) {
            (_, []) => base_case_note = Some("terminal degree is 0".into()),
            (Some((Family::D, n)), [i]) => {
                let k = u32::try_from(t.terminal.0[*i]).unwrap_or(u32::MAX);
                if k <= caps.base_k_max {
                    base_case = Some(base_case_audit(Family::D, n, g.nodes[*i], k, caps.base_a_max)?);
                } else {
                    base_case_note = Some(format!("k = {k} above the base-case bound {}", caps.base_k_max));
                }
            }
            _ => base_case_note = Some("no base-case family for this graph".into()),
        }
    }
    let ok = to_nef.ok
        && to_basic.as_ref().is_some_and(|t| t.ok)
        && measure_ok != Some(false)
        && base_case.as_ref().is_none_or(|b| b.one_per_exponent && b.degrees_ok && b.matches);
    Ok(EquivalenceAudit {
        case: case.to_string(),
        initial: d.clone(),
        to_nef,
        to_basic,
        base_case,
        base_case_note,
        measure_ok,
        ok,
    })
}
