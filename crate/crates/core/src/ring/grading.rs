use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use crate::error::{CoxError, Result};
use crate::graph::IntegerMatrix;
use crate::lattice::{minimal_solutions, DEFAULT_POINT_LIMIT};

/// Integer vector indexed by graph nodes (in `Grading::nodes` order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nef(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, o: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiDegree {
    type Output = MultiDegree;
    fn sub(self, o: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiDegree {
    type Output = MultiDegree;
    fn neg(self) -> MultiDegree {
        MultiDegree(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weight matrix assigning a multidegree to each ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub variables: Vec<String>,
    pub degree_matrix: IntegerMatrix,
    /// Node id of each matrix row.
    pub nodes: Vec<usize>,
}

impl Grading {
    pub fn new(variables: Vec<String>, degree_matrix: IntegerMatrix, nodes: Vec<usize>) -> Result<Self> {
        if degree_matrix.cols != variables.len() {
            return Err(CoxError::param("degree matrix columns must match variable count"));
        }
        if degree_matrix.rows != nodes.len() {
            return Err(CoxError::param("degree matrix rows must match node count"));
        }
        Ok(Self { variables, degree_matrix, nodes })
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn rank(&self) -> usize {
        self.degree_matrix.rows
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.degree_matrix.column(j)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Row index of a node id.
    pub fn node_index(&self, id: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == id)
    }

    pub fn unit(&self, node: usize) -> MultiDegree {
        MultiDegree::unit(self.rank(), self.node_index(node).expect("node of this grading"))
    }

    pub fn degree_of(&self, m: &Monomial) -> Result<MultiDegree> {
        if m.nvars() != self.nvars() {
            return Err(CoxError::param(format!(
                "monomial has {} exponents, grading has {} variables",
                m.nvars(),
                self.nvars()
            )));
        }
        Ok(MultiDegree(
            self.degree_matrix
                .entries
                .iter()
                .map(|row| row.iter().zip(&m.exponents).map(|(&a, &e)| a * i64::from(e)).sum())
                .collect(),
        ))
    }

    pub fn display(&self, m: &Monomial) -> String {
        m.display(&self.variables)
    }
}

/// All monomials of a fixed degree, as minimal solutions plus the
/// degree-zero monoid acting on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub particular: Vec<Monomial>,
    pub recession: Vec<Monomial>,
}

impl SolutionSet {
    /// Whether `m` is a minimal solution times a product of recession elements.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.particular
            .iter()
            .any(|p| m.div(p).is_some_and(|rest| in_monoid(&rest, &self.recession)))
    }
}

/// Membership in the monoid generated by `gens`, by depth-first search.
pub fn in_monoid(m: &Monomial, gens: &[Monomial]) -> bool {
    fn go(m: &Monomial, gens: &[Monomial], start: usize) -> bool {
        if m.is_one() {
            return true;
        }
        (start..gens.len()).any(|i| m.div(&gens[i]).is_some_and(|r| go(&r, gens, i)))
    }
    go(m, gens, 0)
}

pub fn solve_degree_system(g: &Grading, d: &MultiDegree) -> Result<SolutionSet> {
    solve_degree_system_excluding(g, d, &[], DEFAULT_POINT_LIMIT)
}

/// Solves `degree_of(m) = d` with the listed variables forced to exponent 0.
pub fn solve_degree_system_excluding(
    g: &Grading,
    d: &MultiDegree,
    excluded: &[usize],
    limit: u64,
) -> Result<SolutionSet> {
    if d.len() != g.rank() {
        return Err(CoxError::param("degree length does not match grading"));
    }
    let active: Vec<usize> = (0..g.nvars()).filter(|j| !excluded.contains(j)).collect();
    let a: Vec<Vec<i64>> = g
        .degree_matrix
        .entries
        .iter()
        .map(|row| active.iter().map(|&j| row[j]).collect())
        .collect();
    let lift = |v: Vec<i64>| -> Result<Monomial> {
        let mut full = vec![0i64; g.nvars()];
        for (k, &j) in active.iter().enumerate() {
            full[j] = v[k];
        }
        Monomial::from_i64(&full).ok_or(CoxError::Overflow("solution exponents"))
    };
    let (p, r) = minimal_solutions(&a, &d.0, active.len(), limit)?;
    let mut particular: Vec<Monomial> = p.into_iter().map(lift).collect::<Result<_>>()?;
    let mut recession: Vec<Monomial> = r.into_iter().map(lift).collect::<Result<_>>()?;
    particular.sort();
    recession.sort();
    Ok(SolutionSet { particular, recession })
}
