//! Dual graphs of minimal resolutions: ADE builders, custom star-shaped
//! trees, intersection matrices and the extended degree matrix.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};
use crate::linalg::determinant;
use crate::ring::Grading;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafVariable {
    pub name: String,
    pub node: usize,
}

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl IntegerMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(CoxError::param("ragged matrix rows"));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Tree of exceptional curves with marked leaf variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionGraph {
    pub nodes: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
    pub self_intersection: BTreeMap<usize, i64>,
    pub leaf_variables: Vec<LeafVariable>,
}

/// Wire form: edges as two-element arrays.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    nodes: Vec<usize>,
    edges: Vec<[usize; 2]>,
    self_intersection: BTreeMap<usize, i64>,
    leaf_variables: Vec<LeafVariable>,
}

/// A star-shaped view of a tree: a center and its branches, each listed
/// from the node adjacent to the center outward. Chains have no center and
/// a single branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLayout {
    pub center: Option<usize>,
    pub branches: Vec<Vec<usize>>,
}

impl ResolutionGraph {
    /// Validates the tree and leaf-variable invariants.
    pub fn new(
        nodes: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        self_intersection: BTreeMap<usize, i64>,
        leaf_variables: Vec<LeafVariable>,
    ) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        let g = Self { nodes, edges, self_intersection, leaf_variables };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let set: BTreeSet<usize> = self.nodes.iter().copied().collect();
        if set.len() != self.nodes.len() {
            return Err(CoxError::param("duplicate node ids"));
        }
        if self.nodes.is_empty() {
            return Err(CoxError::param("graph has no nodes"));
        }
        for &(a, b) in &self.edges {
            if a == b || !set.contains(&a) || !set.contains(&b) {
                return Err(CoxError::param(format!("invalid edge ({a}, {b})")));
            }
        }
        if self.edges.len() + 1 != self.nodes.len() {
            return Err(CoxError::param("edge count must be node count minus one"));
        }
        // connectivity
        let mut seen = BTreeSet::from([self.nodes[0]]);
        let mut queue = VecDeque::from([self.nodes[0]]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != self.nodes.len() {
            return Err(CoxError::param("graph is not connected"));
        }
        for n in &self.nodes {
            if !self.self_intersection.contains_key(n) {
                return Err(CoxError::param(format!("missing self-intersection for node {n}")));
            }
        }
        let mut names = BTreeSet::new();
        for lv in &self.leaf_variables {
            if !set.contains(&lv.node) {
                return Err(CoxError::param(format!("leaf variable {} on unknown node {}", lv.name, lv.node)));
            }
            if !names.insert(lv.name.clone()) {
                return Err(CoxError::param(format!("duplicate variable name {}", lv.name)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Position of a node id in `nodes`, which indexes degree vectors.
    pub fn index_of(&self, id: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == id)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Unique path between two nodes, endpoints included.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        parent.insert(from, from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(v);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Star decomposition when the tree has at most one node of valence >= 3.
    pub fn layout(&self) -> Option<TreeLayout> {
        let branch_nodes: Vec<usize> = self.nodes.iter().copied().filter(|&v| self.valence(v) >= 3).collect();
        match branch_nodes.as_slice() {
            [] => {
                if self.nodes.len() == 1 {
                    return Some(TreeLayout { center: None, branches: vec![self.nodes.clone()] });
                }
                // chain: start at the end with the smaller id
                let ends: Vec<usize> = self.nodes.iter().copied().filter(|&v| self.valence(v) == 1).collect();
                let start = *ends.iter().min()?;
                let end = *ends.iter().max()?;
                Some(TreeLayout { center: None, branches: vec![self.path(start, end)?] })
            }
            [c] => {
                let mut branches = Vec::new();
                for first in self.neighbors(*c) {
                    let mut branch = vec![first];
                    let mut prev = *c;
                    let mut cur = first;
                    loop {
                        let next: Vec<usize> = self.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
                        match next.as_slice() {
                            [] => break,
                            [w] => {
                                branch.push(*w);
                                prev = cur;
                                cur = *w;
                            }
                            _ => return None,
                        }
                    }
                    branches.push(branch);
                }
                Some(TreeLayout { center: Some(*c), branches })
            }
            _ => None,
        }
    }

    /// Reduction order: non-long branches from the far end inward, then the
    /// center, then the long branch outward. The long branch is the last one
    /// of maximal length. Chains are ordered end to end; other trees use
    /// node order.
    pub fn reduction_order(&self) -> Vec<usize> {
        let Some(layout) = self.layout() else {
            return self.nodes.clone();
        };
        let Some(center) = layout.center else {
            return layout.branches[0].clone();
        };
        let long = layout.long_branch_index();
        let mut order = Vec::with_capacity(self.nodes.len());
        for (i, b) in layout.branches.iter().enumerate() {
            if i != long {
                order.extend(b.iter().rev());
            }
        }
        order.push(center);
        order.extend(&layout.branches[long]);
        order
    }

    /// Nodes carrying a leaf variable.
    pub fn leaf_nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.leaf_variables.iter().map(|l| l.node).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let wire = GraphJson {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            self_intersection: self.self_intersection.clone(),
            leaf_variables: self.leaf_variables.clone(),
        };
        serde_json::to_value(wire).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: GraphJson =
            serde_json::from_str(s).map_err(|e| CoxError::param(format!("graph JSON: {e}")))?;
        Self::new(
            wire.nodes,
            wire.edges.into_iter().map(|[a, b]| (a, b)),
            wire.self_intersection,
            wire.leaf_variables,
        )
    }

    /// Canonical form for isomorphism checks: sorted multiset of (valence,
    /// sorted neighbor valences), plus the sorted branch lengths for stars.
    pub fn shape_signature(&self) -> (Vec<(usize, Vec<usize>)>, Option<Vec<usize>>) {
        let mut sig: Vec<(usize, Vec<usize>)> = self
            .nodes
            .iter()
            .map(|&v| {
                let mut nv: Vec<usize> = self.neighbors(v).iter().map(|&w| self.valence(w)).collect();
                nv.sort_unstable();
                (self.valence(v), nv)
            })
            .collect();
        sig.sort();
        let lengths = self.layout().map(|l| {
            let mut v: Vec<usize> = l.branches.iter().map(Vec::len).collect();
            v.sort_unstable();
            v
        });
        (sig, lengths)
    }
}

impl TreeLayout {
    pub fn long_branch_index(&self) -> usize {
        let max = self.branches.iter().map(Vec::len).max().unwrap_or(0);
        self.branches.iter().rposition(|b| b.len() == max).unwrap_or(0)
    }

    /// Branch containing a node, with the node's position on it.
    pub fn locate(&self, node: usize) -> Option<(usize, usize)> {
        self.branches
            .iter()
            .enumerate()
            .find_map(|(i, b)| b.iter().position(|&v| v == node).map(|p| (i, p)))
    }
}

fn minus_two(nodes: &[usize]) -> BTreeMap<usize, i64> {
    nodes.iter().map(|&n| (n, -2)).collect()
}

fn leaf(name: impl Into<String>, node: usize) -> LeafVariable {
    LeafVariable { name: name.into(), node }
}

/// Dual graph of the minimal resolution of an ADE singularity.
pub fn build_singularity(family: Family, n: usize) -> Result<ResolutionGraph> {
    match family {
        Family::A => {
            if n < 1 {
                return Err(CoxError::param("A_n requires n >= 1"));
            }
            let nodes: Vec<usize> = (1..=n).collect();
            let edges = (1..n).map(|i| (i, i + 1));
            let leaves = if n == 1 {
                vec![leaf("x1", 1), leaf("x1'", 1)]
            } else {
                vec![leaf("x1", 1), leaf(format!("x{n}"), n)]
            };
            ResolutionGraph::new(nodes.clone(), edges, minus_two(&nodes), leaves)
        }
        Family::D => {
            if n < 4 {
                return Err(CoxError::param("D_n requires n >= 4"));
            }
            let nodes: Vec<usize> = (0..n).collect();
            let mut edges = vec![(0, 1), (0, 2), (0, 3)];
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
            let leaves = vec![leaf("x1", 1), leaf("x2", 2), leaf(format!("x{}", n - 1), n - 1)];
            ResolutionGraph::new(nodes.clone(), edges, minus_two(&nodes), leaves)
        }
        Family::E => {
            if !(6..=8).contains(&n) {
                return Err(CoxError::param("E_n requires n in 6..=8"));
            }
            let nodes: Vec<usize> = (0..n).collect();
            let mut edges = vec![(0, 1), (0, 2), (2, 3), (0, 4)];
            edges.extend((4..n - 1).map(|i| (i, i + 1)));
            let leaves = vec![leaf("x1", 1), leaf("x3", 3), leaf(format!("x{}", n - 1), n - 1)];
            ResolutionGraph::new(nodes.clone(), edges, minus_two(&nodes), leaves)
        }
    }
}

/// Star-shaped tree with center 0 and one chain per entry, numbered branch
/// by branch; each chain end carries the variable `x<end id>`.
pub fn build_custom_tree(branch_lengths: &[usize]) -> Result<ResolutionGraph> {
    if branch_lengths.is_empty() {
        return Err(CoxError::param("custom tree needs at least one branch"));
    }
    if branch_lengths.contains(&0) {
        return Err(CoxError::param("branch lengths must be positive"));
    }
    let total: usize = branch_lengths.iter().sum();
    let nodes: Vec<usize> = (0..=total).collect();
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    let mut next = 1;
    for &len in branch_lengths {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        leaves.push(leaf(format!("x{prev}"), prev));
    }
    ResolutionGraph::new(nodes.clone(), edges, minus_two(&nodes), leaves)
}

pub fn intersection_matrix(g: &ResolutionGraph) -> IntegerMatrix {
    let n = g.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, &v) in g.nodes.iter().enumerate() {
        m[i][i] = g.self_intersection[&v];
    }
    for &(a, b) in &g.edges {
        let (i, j) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
        m[i][j] = 1;
        m[j][i] = 1;
    }
    IntegerMatrix { rows: n, cols: n, entries: m }
}

/// Leaf variables first, each of degree `e_node`, then `y<id>` per node
/// with the intersection-matrix column as degree.
pub fn extended_degree_matrix(g: &ResolutionGraph) -> Grading {
    let n = g.len();
    let im = intersection_matrix(g);
    let mut names = Vec::new();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for lv in &g.leaf_variables {
        names.push(lv.name.clone());
        let mut e = vec![0; n];
        e[g.index_of(lv.node).unwrap()] = 1;
        cols.push(e);
    }
    for (j, &v) in g.nodes.iter().enumerate() {
        names.push(format!("y{v}"));
        cols.push(im.column(j));
    }
    let entries: Vec<Vec<i64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Grading::new(names, IntegerMatrix { rows: n, cols: cols.len(), entries }, g.nodes.clone())
        .expect("extended degree matrix is well formed")
}

/// Sylvester criterion with exact minors.
pub fn is_negative_definite(m: &IntegerMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(CoxError::param("matrix is not symmetric"));
    }
    for k in 1..=m.rows {
        let minor: Vec<Vec<i64>> = m.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = determinant(&minor);
        let want_negative = k % 2 == 1;
        let ok = if want_negative { d < 0.into() } else { d > 0.into() };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A case addressed by name: `A3`, `D5`, `E7`, or `custom:2,2,3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseName {
    Singularity { family: Family, n: usize },
    Custom { branches: Vec<usize> },
}

impl CaseName {
    pub fn build(&self) -> Result<ResolutionGraph> {
        match self {
            CaseName::Singularity { family, n } => build_singularity(*family, *n),
            CaseName::Custom { branches } => build_custom_tree(branches),
        }
    }

    pub fn family(&self) -> Option<(Family, usize)> {
        match self {
            CaseName::Singularity { family, n } => Some((*family, *n)),
            CaseName::Custom { .. } => None,
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseName::Singularity { family, n } => write!(f, "{family}{n}"),
            CaseName::Custom { branches } => {
                let parts: Vec<String> = branches.iter().map(usize::to_string).collect();
                write!(f, "custom:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for CaseName {
    type Err = CoxError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("custom:") {
            let branches = rest
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CoxError::param(format!("bad branch list {rest:?}")))?;
            return Ok(CaseName::Custom { branches });
        }
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('A' | 'a') => Family::A,
            Some('D' | 'd') => Family::D,
            Some('E' | 'e') => Family::E,
            _ => return Err(CoxError::param(format!("unknown case {s:?}"))),
        };
        let n = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| CoxError::param(format!("bad rank in {s:?}")))?;
        Ok(CaseName::Singularity { family, n })
    }
}
