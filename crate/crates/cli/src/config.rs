//! Run configuration. Precedence: built-in defaults, then `COXFORGE_CAP`,
//! then the JSON config file, then command-line flags.

use std::path::Path;

use coxforge::graph::{CaseName, Family};
use coxforge::reduction::{AuditCaps, DEFAULT_STEP_CAP, DEFAULT_TRUNCATION_CAP, HARD_TRUNCATION_CAP};
use coxforge::ring::MultiDegree;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CAP_ENV: &str = "COXFORGE_CAP";
pub const DEFAULT_SEED: u64 = 0x00c0_ffee;
pub const DEFAULT_MAX_CELLS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub truncation: u64,
    pub hard_truncation: u64,
    pub step_cap: usize,
    pub grid_min: i64,
    pub grid_max: i64,
    /// Cells audited per case; larger boxes are sampled down to this.
    pub max_cells: usize,
    pub seed: u64,
    pub base_k_max: u32,
    pub base_a_max: u32,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            truncation: DEFAULT_TRUNCATION_CAP,
            hard_truncation: HARD_TRUNCATION_CAP,
            step_cap: DEFAULT_STEP_CAP,
            grid_min: -3,
            grid_max: 3,
            max_cells: DEFAULT_MAX_CELLS,
            seed: DEFAULT_SEED,
            base_k_max: 3,
            base_a_max: 3,
            strict: false,
        }
    }
}

impl RunConfig {
    /// Defaults adjusted by the environment and an optional config file.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let mut c = Self::default();
        if let Ok(v) = std::env::var(CAP_ENV) {
            c.truncation = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("{CAP_ENV} must be a positive integer, got {v:?}")))?;
        }
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            let file: serde_json::Value = serde_json::from_str(&text)?;
            let mut merged = serde_json::to_value(&c)?;
            if let (Some(m), Some(f)) = (merged.as_object_mut(), file.as_object()) {
                for (k, v) in f {
                    m.insert(k.clone(), v.clone());
                }
            } else {
                return Err(CliError::usage("config file must hold a JSON object"));
            }
            c = serde_json::from_value(merged).map_err(|e| CliError::usage(format!("config file: {e}")))?;
        }
        c.validate()?;
        Ok(c)
    }

    /// `truncation=24,hard=40,steps=10000,base-k=3,base-a=3`
    /// Leaves `self` unchanged on error.
    pub fn apply_caps(&mut self, spec: &str) -> CliResult<()> {
        let mut next = self.clone();
        next.set_caps(spec)?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    fn set_caps(&mut self, spec: &str) -> CliResult<()> {
        for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("cap {part:?} is not key=value")))?;
            let bad = || CliError::usage(format!("cap {k} needs a nonnegative integer, got {v:?}"));
            let n: u64 = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "truncation" => self.truncation = n,
                "hard" => self.hard_truncation = n,
                "steps" => self.step_cap = usize::try_from(n).map_err(|_| bad())?,
                "base-k" => self.base_k_max = u32::try_from(n).map_err(|_| bad())?,
                "base-a" => self.base_a_max = u32::try_from(n).map_err(|_| bad())?,
                other => return Err(CliError::usage(format!("unknown cap {other:?}"))),
            }
        }
        Ok(())
    }

    /// `-3..3`, or `R` for `-R..R`.
    pub fn apply_grid(&mut self, spec: &str) -> CliResult<()> {
        let bad = || CliError::usage(format!("grid {spec:?} is not LO..HI or R"));
        let (lo, hi) = match spec.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let r: i64 = spec.trim().parse().map_err(|_| bad())?;
                (-r, r)
            }
        };
        if lo > hi {
            return Err(CliError::usage("empty grid"));
        }
        self.grid_min = lo;
        self.grid_max = hi;
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.truncation == 0 || self.truncation > self.hard_truncation {
            return Err(CliError::usage("need 0 < truncation <= hard truncation"));
        }
        if self.grid_min > self.grid_max {
            return Err(CliError::usage("empty grid"));
        }
        if self.step_cap == 0 {
            return Err(CliError::usage("step cap must be positive"));
        }
        Ok(())
    }

    pub fn audit_caps(&self) -> AuditCaps {
        AuditCaps {
            truncation: self.truncation,
            hard_truncation: self.hard_truncation,
            step_cap: self.step_cap,
            base_k_max: self.base_k_max,
            base_a_max: self.base_a_max,
            strict: self.strict,
        }
    }
}

/// Parses a case and checks it builds.
pub fn parse_case(s: &str) -> CliResult<CaseName> {
    let c: CaseName = s.parse()?;
    c.build()?;
    Ok(c)
}

pub fn ade(case: &CaseName) -> CliResult<(Family, usize)> {
    case.family()
        .ok_or_else(|| CliError::usage(format!("{case} is not an ADE case")))
}

/// `0,-1,0,0`, or `e3` / `2e3` for multiples of a unit vector.
pub fn parse_degree(s: &str, len: usize) -> CliResult<MultiDegree> {
    let s = s.trim();
    let bad = || CliError::usage(format!("degree {s:?} is not a comma list or kE<node>"));
    if let Some((k, i)) = s.split_once(['e', 'E']) {
        let k: i64 = if k.is_empty() { 1 } else { k.parse().map_err(|_| bad())? };
        let i: usize = i.parse().map_err(|_| bad())?;
        if i >= len {
            return Err(CliError::usage(format!("node {i} out of range for {len} nodes")));
        }
        return Ok(MultiDegree::unit(len, i).scaled(k));
    }
    let v: Vec<i64> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
    if v.len() != len {
        return Err(CliError::usage(format!("degree has {} entries, case has {len} nodes", v.len())));
    }
    Ok(MultiDegree(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_and_grid() {
        let mut c = RunConfig::default();
        c.apply_caps("truncation=20,steps=50").unwrap();
        assert_eq!((c.truncation, c.step_cap), (20, 50));
        assert!(c.apply_caps("bogus=1").is_err());
        assert!(c.apply_caps("truncation=99").is_err());
        c.apply_grid("2").unwrap();
        assert_eq!((c.grid_min, c.grid_max), (-2, 2));
        c.apply_grid("-1..4").unwrap();
        assert_eq!((c.grid_min, c.grid_max), (-1, 4));
        assert!(c.apply_grid("3..1").is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(parse_degree("0,-1,0,0", 4).unwrap(), MultiDegree(vec![0, -1, 0, 0]));
        assert_eq!(parse_degree("2e7", 8).unwrap(), MultiDegree::unit(8, 7).scaled(2));
        assert!(parse_degree("1,2", 4).is_err());
        assert!(parse_degree("e9", 4).is_err());
    }
}
