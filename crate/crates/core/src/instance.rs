//! Problem instances and the four cost models.

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{Cost, Rational};

/// A subset of the universe, one bit per element.
pub type ElementSet = FixedBitSet;

/// Builds an [`ElementSet`] over `n` elements from explicit indices.
pub fn element_set(n: usize, elements: impl IntoIterator<Item = usize>) -> ElementSet {
    let mut s = FixedBitSet::with_capacity(n);
    for e in elements {
        s.insert(e);
    }
    s
}

/// The whole universe `0..n`.
pub fn full_set(n: usize) -> ElementSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

#[derive(Clone, Debug, PartialEq)]
pub enum CostModel {
    /// Every set costs 1 on every machine.
    Unit,
    /// `c(S, j) = c(S)`.
    Identical { base_costs: Vec<u64> },
    /// `c(S, j) = c(S) / s(j)`.
    Related {
        base_costs: Vec<u64>,
        speeds: Vec<Rational>,
    },
    /// Arbitrary `k x m` matrix, row per set.
    Unrelated { matrix: Vec<Vec<Cost>> },
}

impl CostModel {
    pub fn kind(&self) -> &'static str {
        match self {
            CostModel::Unit => "unit",
            CostModel::Identical { .. } => "identical",
            CostModel::Related { .. } => "related",
            CostModel::Unrelated { .. } => "unrelated",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    n: usize,
    sets: Vec<Vec<usize>>,
    bits: Vec<ElementSet>,
    m: usize,
    cost_model: CostModel,
    dag: Option<Vec<(usize, usize)>>,
}

impl ProblemInstance {
    /// Builds an instance after checking dimensions and index ranges.
    ///
    /// Sets are sorted and deduplicated. Cost positivity, coverability and
    /// acyclicity are reported by [`ProblemInstance::validate`] instead, so
    /// that a malformed instance can still be inspected.
    pub fn new(
        n: usize,
        sets: Vec<Vec<usize>>,
        m: usize,
        cost_model: CostModel,
        dag: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::Validation("m: machine count must be at least 1".into()));
        }
        let k = sets.len();
        let mut normalized = Vec::with_capacity(k);
        for (i, set) in sets.into_iter().enumerate() {
            for (j, &e) in set.iter().enumerate() {
                if e >= n {
                    return Err(Error::InvalidIndex {
                        path: format!("sets[{i}][{j}]"),
                        index: e,
                        limit: n,
                    });
                }
            }
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            normalized.push(set);
        }
        match &cost_model {
            CostModel::Unit => {}
            CostModel::Identical { base_costs } => check_len("cost_model.base_costs", base_costs.len(), k)?,
            CostModel::Related { base_costs, speeds } => {
                check_len("cost_model.base_costs", base_costs.len(), k)?;
                check_len("cost_model.speeds", speeds.len(), m)?;
            }
            CostModel::Unrelated { matrix } => {
                check_len("cost_model.matrix", matrix.len(), k)?;
                for (i, row) in matrix.iter().enumerate() {
                    check_len(&format!("cost_model.matrix[{i}]"), row.len(), m)?;
                }
            }
        }
        if let Some(edges) = &dag {
            for (i, &(a, b)) in edges.iter().enumerate() {
                for (side, v) in [(0, a), (1, b)] {
                    if v >= k {
                        return Err(Error::InvalidIndex {
                            path: format!("dag_edges[{i}][{side}]"),
                            index: v,
                            limit: k,
                        });
                    }
                }
            }
        }
        let bits = normalized.iter().map(|s| element_set(n, s.iter().copied())).collect();
        Ok(ProblemInstance {
            n,
            sets: normalized,
            bits,
            m,
            cost_model,
            dag,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, s: usize) -> &[usize] {
        &self.sets[s]
    }

    pub fn set_bits(&self, s: usize) -> &ElementSet {
        &self.bits[s]
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost_model
    }

    pub fn dag_edges(&self) -> Option<&[(usize, usize)]> {
        self.dag.as_deref()
    }

    pub fn universe(&self) -> ElementSet {
        full_set(self.n)
    }

    /// Returns a copy with the precedence graph replaced.
    pub fn with_dag(&self, dag: Option<Vec<(usize, usize)>>) -> Result<Self> {
        ProblemInstance::new(self.n, self.sets.clone(), self.m, self.cost_model.clone(), dag)
    }

    /// `c(S, j)`.
    pub fn cost(&self, s: usize, j: usize) -> Cost {
        match &self.cost_model {
            CostModel::Unit => Cost::Finite(Rational::one()),
            CostModel::Identical { base_costs } => Cost::from(base_costs[s] as i128),
            CostModel::Related { base_costs, speeds } => {
                Cost::Finite(Rational::from_integer(base_costs[s] as i128) / speeds[j])
            }
            CostModel::Unrelated { matrix } => matrix[s][j],
        }
    }

    pub(crate) fn check_set(&self, s: usize, path: &str) -> Result<()> {
        if s >= self.k() {
            return Err(Error::InvalidIndex {
                path: path.to_string(),
                index: s,
                limit: self.k(),
            });
        }
        Ok(())
    }

    /// Smallest positive finite cost over all (set, machine) pairs.
    pub fn min_positive_cost(&self) -> Option<Rational> {
        self.finite_costs().filter(|c| *c > Rational::zero()).min()
    }

    /// Sum of all finite costs, the trivial schedule-length bound `C`.
    pub fn total_cost(&self) -> Rational {
        self.finite_costs().fold(Rational::zero(), |a, c| a + c)
    }

    fn finite_costs(&self) -> impl Iterator<Item = Rational> + '_ {
        (0..self.k()).flat_map(move |s| (0..self.m).filter_map(move |j| self.cost(s, j).finite()))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let mut covered = FixedBitSet::with_capacity(self.n);
        for b in &self.bits {
            covered.union_with(b);
        }
        let uncovered: Vec<usize> = (0..self.n).filter(|&u| !covered.contains(u)).collect();
        for &u in &uncovered {
            issues.push(ValidationIssue::Uncovered(u));
        }
        match &self.cost_model {
            CostModel::Unit => {}
            CostModel::Identical { base_costs } => {
                for (s, &c) in base_costs.iter().enumerate() {
                    if c == 0 {
                        issues.push(ValidationIssue::NonPositiveCost { set: s, machine: None });
                    }
                }
            }
            CostModel::Related { base_costs, speeds } => {
                for (s, &c) in base_costs.iter().enumerate() {
                    if c == 0 {
                        issues.push(ValidationIssue::NonPositiveCost { set: s, machine: None });
                    }
                }
                for (j, sp) in speeds.iter().enumerate() {
                    if *sp <= Rational::zero() {
                        issues.push(ValidationIssue::NonPositiveSpeed(j));
                    }
                }
            }
            CostModel::Unrelated { matrix } => {
                for (s, row) in matrix.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        if let Cost::Finite(v) = c {
                            if *v <= Rational::zero() {
                                issues.push(ValidationIssue::NonPositiveCost { set: s, machine: Some(j) });
                            }
                        }
                    }
                }
            }
        }
        if let Some(edges) = &self.dag {
            if let Some(node) = find_cycle(self.k(), edges) {
                issues.push(ValidationIssue::CyclicDag(node));
            }
        }
        ValidationReport {
            coverable: uncovered.is_empty(),
            uncovered,
            issues,
        }
    }

    /// Rejects instances the solvers cannot handle.
    pub fn ensure_solvable(&self) -> Result<()> {
        let report = self.validate();
        if !report.coverable {
            return Err(Error::Uncoverable(report.uncovered));
        }
        if let Some(issue) = report.issues.first() {
            return Err(match issue {
                ValidationIssue::CyclicDag(node) => Error::CyclicDag(*node),
                other => Error::Validation(other.to_string()),
            });
        }
        Ok(())
    }
}

fn check_len(path: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Validation(format!("{path}: expected {want} entries, found {got}")));
    }
    Ok(())
}

/// Returns some node on a directed cycle, if any (Kahn's algorithm leftovers).
pub(crate) fn find_cycle(k: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut indeg = vec![0usize; k];
    let mut succ = vec![Vec::new(); k];
    for &(a, b) in edges {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut stack: Vec<usize> = (0..k).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    if seen == k {
        None
    } else {
        (0..k).find(|&v| indeg[v] > 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationIssue {
    Uncovered(usize),
    NonPositiveCost { set: usize, machine: Option<usize> },
    NonPositiveSpeed(usize),
    CyclicDag(usize),
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::Uncovered(u) => write!(f, "element {u} is in no set"),
            ValidationIssue::NonPositiveCost { set, machine: None } => write!(f, "set {set} has non-positive cost"),
            ValidationIssue::NonPositiveCost { set, machine: Some(j) } => {
                write!(f, "set {set} has non-positive cost on machine {j}")
            }
            ValidationIssue::NonPositiveSpeed(j) => write!(f, "machine {j} has non-positive speed"),
            ValidationIssue::CyclicDag(v) => write!(f, "precedence graph has a cycle through set {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub coverable: bool,
    pub uncovered: Vec<usize>,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Free-function form of [`ProblemInstance::validate`].
pub fn validate_instance(inst: &ProblemInstance) -> ValidationReport {
    inst.validate()
}
