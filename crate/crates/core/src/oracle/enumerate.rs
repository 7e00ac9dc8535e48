//! Exhaustive set-to-machine labelings for PDS and PMC.

use num_traits::Zero;

use super::{NodeCounter, OracleLimits};
use crate::error::{Error, Result};
use crate::instance::{ElementSet, ProblemInstance};
use crate::pds::candidates;
use crate::rational::{DensityValue, Rational};
use crate::schedule::Assignment;

/// `prev[j]`: the closest lower machine with an identical cost column and,
/// when given, the same budget.
pub(crate) fn identical_predecessors(inst: &ProblemInstance, budgets: Option<&[Rational]>) -> Vec<Option<usize>> {
    (0..inst.m())
        .map(|j| {
            (0..j).rev().find(|&i| {
                budgets.is_none_or(|b| b[i] == b[j]) && (0..inst.k()).all(|s| inst.cost(s, i) == inst.cost(s, j))
            })
        })
        .collect()
}

struct Search<'a> {
    inst: &'a ProblemInstance,
    sets: Vec<usize>,
    /// `suffix[i]`: union of `sets[i..]` restricted to the target elements.
    suffix: Vec<ElementSet>,
    prev: Vec<Option<usize>>,
    labels: Vec<Option<usize>>,
    loads: Vec<Rational>,
    counts: Vec<usize>,
    nodes: NodeCounter,
}

impl<'a> Search<'a> {
    fn new(
        inst: &'a ProblemInstance,
        sets: Vec<usize>,
        target: &ElementSet,
        budgets: Option<&[Rational]>,
        node_budget: u64,
    ) -> Self {
        let mut suffix = vec![ElementSet::with_capacity(inst.n()); sets.len() + 1];
        for i in (0..sets.len()).rev() {
            let mut u = suffix[i + 1].clone();
            u.union_with(inst.set_bits(sets[i]));
            u.intersect_with(target);
            suffix[i] = u;
        }
        Search {
            inst,
            prev: identical_predecessors(inst, budgets),
            labels: vec![None; sets.len()],
            loads: vec![Rational::zero(); inst.m()],
            counts: vec![0; inst.m()],
            sets,
            suffix,
            nodes: NodeCounter::new(node_budget),
        }
    }

    /// Machines set `i` may go on: finite cost, and an empty machine only if
    /// its identical predecessor is already in use.
    fn machines(&self, i: usize) -> Vec<(usize, Rational)> {
        let s = self.sets[i];
        (0..self.inst.m())
            .filter(|&j| self.counts[j] > 0 || self.prev[j].is_none_or(|p| self.counts[p] > 0))
            .filter_map(|j| self.inst.cost(s, j).finite().map(|c| (j, c)))
            .collect()
    }

    fn assignment(&self) -> Assignment {
        let mut per_machine = vec![Vec::new(); self.inst.m()];
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(j) = l {
                per_machine[*j].push(self.sets[i]);
            }
        }
        Assignment { per_machine }
    }

    fn place(&mut self, i: usize, j: usize, c: Rational) {
        self.labels[i] = Some(j);
        self.loads[j] += c;
        self.counts[j] += 1;
    }

    fn unplace(&mut self, i: usize, j: usize, c: Rational) {
        self.labels[i] = None;
        self.loads[j] -= c;
        self.counts[j] -= 1;
    }
}

struct PdsBest {
    density: DensityValue,
    count: usize,
    assignment: Assignment,
}

/// Densest assignment by enumerating every labeling of the sets that meet
/// `remaining`; ties go to fewer sets.
pub fn exact_pds(inst: &ProblemInstance, remaining: &ElementSet, limits: &OracleLimits) -> Result<(Assignment, DensityValue)> {
    limits.check(inst)?;
    let cand = candidates(inst, remaining, None);
    if cand.is_empty() {
        return Err(Error::NoCoverage);
    }
    let mut search = Search::new(inst, cand, remaining, None, limits.node_budget);
    let mut best: Option<PdsBest> = None;
    let cov = ElementSet::with_capacity(inst.n());
    pds_dfs(&mut search, 0, &cov, 0, remaining, &mut best)?;
    let best = best.ok_or(Error::NoCoverage)?;
    Ok((best.assignment, best.density))
}

fn pds_dfs(
    st: &mut Search,
    i: usize,
    cov: &ElementSet,
    count: usize,
    remaining: &ElementSet,
    best: &mut Option<PdsBest>,
) -> Result<()> {
    st.nodes.tick()?;
    let makespan = st.loads.iter().copied().max().unwrap_or_else(Rational::zero);
    let covered = cov.count_ones(..) as u64;
    if let Some(b) = best.as_ref() {
        if makespan > Rational::zero() {
            let reach = cov.union_count(&st.suffix[i]) as u64;
            let ub = DensityValue::new(reach, makespan);
            if ub < b.density || (ub == b.density && count >= b.count) {
                return Ok(());
            }
        }
    }
    if i == st.sets.len() {
        if count > 0 && covered > 0 {
            let d = DensityValue::new(covered, makespan);
            if best.as_ref().is_none_or(|b| d > b.density || (d == b.density && count < b.count)) {
                *best = Some(PdsBest {
                    density: d,
                    count,
                    assignment: st.assignment(),
                });
            }
        }
        return Ok(());
    }
    pds_dfs(st, i + 1, cov, count, remaining, best)?;
    let mut next = cov.clone();
    next.union_with(st.inst.set_bits(st.sets[i]));
    next.intersect_with(remaining);
    for (j, c) in st.machines(i) {
        st.place(i, j, c);
        pds_dfs(st, i + 1, &next, count + 1, remaining, best)?;
        st.unplace(i, j, c);
    }
    Ok(())
}

/// Maximum coverage of the universe under per-machine budgets, by
/// enumeration; ties go to fewer sets.
pub fn exact_pmc(inst: &ProblemInstance, budgets: &[Rational], limits: &OracleLimits) -> Result<(Assignment, usize)> {
    limits.check(inst)?;
    if budgets.len() != inst.m() {
        return Err(Error::Validation(format!(
            "budgets: expected {} entries, found {}",
            inst.m(),
            budgets.len()
        )));
    }
    let universe = inst.universe();
    let sets = candidates(inst, &universe, None);
    let mut search = Search::new(inst, sets, &universe, Some(budgets), limits.node_budget);
    let mut best = (0usize, 0usize, Assignment::empty(inst.m()));
    let cov = ElementSet::with_capacity(inst.n());
    pmc_dfs(&mut search, 0, &cov, 0, budgets, &mut best)?;
    Ok((best.2, best.0))
}

fn pmc_dfs(
    st: &mut Search,
    i: usize,
    cov: &ElementSet,
    count: usize,
    budgets: &[Rational],
    best: &mut (usize, usize, Assignment),
) -> Result<()> {
    st.nodes.tick()?;
    let covered = cov.count_ones(..);
    if covered > best.0 || (covered == best.0 && count < best.1) {
        *best = (covered, count, st.assignment());
    }
    if i == st.sets.len() {
        return Ok(());
    }
    let reach = cov.union_count(&st.suffix[i]);
    if reach < best.0 || (reach == best.0 && count + 1 >= best.1) {
        return Ok(());
    }
    pmc_dfs(st, i + 1, cov, count, budgets, best)?;
    let mut next = cov.clone();
    next.union_with(st.inst.set_bits(st.sets[i]));
    for (j, c) in st.machines(i) {
        if st.loads[j] + c > budgets[j] {
            continue;
        }
        st.place(i, j, c);
        pmc_dfs(st, i + 1, &next, count + 1, budgets, best)?;
        st.unplace(i, j, c);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::CostModel;

    fn r(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn pds_t1() {
        let (asg, d) = exact_pds(&fixtures::t1(1), &fixtures::t1(1).universe(), &OracleLimits::default()).unwrap();
        assert_eq!(d.value(), r(2));
        assert_eq!(asg.per_machine, vec![vec![0]]);
        let (_, d) = exact_pds(&fixtures::t1(2), &fixtures::t1(2).universe(), &OracleLimits::default()).unwrap();
        assert_eq!(d.value(), r(3));
    }

    #[test]
    fn pmc_unequal_budgets_on_identical_machines() {
        let inst = ProblemInstance::new(1, vec![vec![0]], 2, CostModel::Unit, None).unwrap();
        let (asg, covered) = exact_pmc(&inst, &[r(0), r(1)], &OracleLimits::default()).unwrap();
        assert_eq!(covered, 1);
        assert_eq!(asg.per_machine, vec![vec![], vec![0]]);
    }

    #[test]
    fn pds_no_coverage() {
        let inst = ProblemInstance::new(2, vec![vec![], vec![]], 1, CostModel::Unit, None).unwrap();
        assert_eq!(
            exact_pds(&inst, &inst.universe(), &OracleLimits::default()).unwrap_err(),
            Error::NoCoverage
        );
    }

    #[test]
    fn pmc_examples() {
        let t1 = fixtures::t1(1);
        let lim = OracleLimits::default();
        assert_eq!(exact_pmc(&t1, &[r(2)], &lim).unwrap().1, 3);
        assert_eq!(exact_pmc(&t1, &[r(0)], &lim).unwrap().1, 0);
        assert_eq!(exact_pmc(&t1, &[r(100)], &lim).unwrap().1, 3);
        assert_eq!(exact_pmc(&t1, &[r(1)], &lim).unwrap().1, 2);
    }

    #[test]
    fn limits_enforced() {
        let lim = OracleLimits {
            max_k: 2,
            ..OracleLimits::default()
        };
        assert!(matches!(
            exact_pds(&fixtures::t1(1), &fixtures::t1(1).universe(), &lim),
            Err(Error::LimitsExceeded(_))
        ));
    }

    #[test]
    fn identical_machine_symmetry() {
        assert_eq!(identical_predecessors(&fixtures::t1(3), None), vec![None, Some(0), Some(1)]);
        let b = [r(1), r(2), r(1)];
        assert_eq!(identical_predecessors(&fixtures::t1(3), Some(&b)), vec![None, None, Some(0)]);
    }
}
