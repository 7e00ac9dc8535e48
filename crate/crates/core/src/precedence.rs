//! Unit-cost scheduling under precedence constraints between sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{find_cycle, CostModel, ElementSet, ProblemInstance};
use crate::rational::{DensityValue, Rational};
use crate::schedule::{coverage, Assignment, Schedule};

/// Precedence graph over set indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecedenceDag {
    k: usize,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    depth: Vec<usize>,
    topo: Vec<usize>,
}

impl PrecedenceDag {
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
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
        if let Some(v) = find_cycle(k, edges) {
            return Err(Error::CyclicDag(v));
        }
        let mut preds = vec![Vec::new(); k];
        let mut succs = vec![Vec::new(); k];
        for &(a, b) in edges {
            if !preds[b].contains(&a) {
                preds[b].push(a);
                succs[a].push(b);
            }
        }
        for p in preds.iter_mut().chain(succs.iter_mut()) {
            p.sort_unstable();
        }
        // Kahn's order, smallest ready index first.
        let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..k).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(k);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &w in &succs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        let mut depth = vec![1; k];
        for &v in &topo {
            depth[v] = 1 + preds[v].iter().map(|&p| depth[p]).max().unwrap_or(0);
        }
        Ok(PrecedenceDag {
            k,
            preds,
            succs,
            depth,
            topo,
        })
    }

    /// The graph of an instance, or an empty graph when it has none.
    pub fn from_instance(inst: &ProblemInstance) -> Result<Self> {
        PrecedenceDag::new(inst.k(), inst.dag_edges().unwrap_or(&[]))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn preds(&self, s: usize) -> &[usize] {
        &self.preds[s]
    }

    pub fn succs(&self, s: usize) -> &[usize] {
        &self.succs[s]
    }

    /// Nodes on the longest chain ending at `s`, counting `s`.
    pub fn depth(&self, s: usize) -> usize {
        self.depth[s]
    }

    /// Largest depth; 0 for an empty graph.
    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// `s` together with all of its transitive predecessors, ascending.
    pub fn closure(&self, s: usize) -> Result<Vec<usize>> {
        if s >= self.k {
            return Err(Error::InvalidIndex {
                path: "set".into(),
                index: s,
                limit: self.k,
            });
        }
        let mut seen = vec![false; self.k];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &p in &self.preds[v] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        Ok((0..self.k).filter(|&v| seen[v]).collect())
    }

    /// First `(set, missing predecessor)` pair violating closure, if any.
    pub fn closure_violation(&self, family: &[usize]) -> Option<(usize, usize)> {
        let mut inside = vec![false; self.k];
        for &s in family {
            inside[s] = true;
        }
        family
            .iter()
            .find_map(|&s| self.preds[s].iter().find(|&&p| !inside[p]).map(|&p| (s, p)))
    }

    /// Subgraph on `keep`, reindexed in ascending order; also returns the map
    /// from new to old indices.
    pub fn induced(&self, keep: &[usize]) -> (PrecedenceDag, Vec<usize>) {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut new_index = vec![usize::MAX; self.k];
        for (i, &v) in sorted.iter().enumerate() {
            new_index[v] = i;
        }
        let edges: Vec<(usize, usize)> = sorted
            .iter()
            .flat_map(|&v| self.preds[v].iter().map(move |&p| (p, v)))
            .filter(|&(p, _)| new_index[p] != usize::MAX)
            .map(|(p, v)| (new_index[p], new_index[v]))
            .collect();
        let dag = PrecedenceDag::new(sorted.len(), &edges).expect("subgraph of a DAG is acyclic");
        (dag, sorted)
    }
}

/// Unit-length sets placed in time slots, layer by layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredAssignment {
    /// `(set, machine, slot)` with slots starting at 0.
    pub placements: Vec<(usize, usize, usize)>,
    /// First slot of each depth layer.
    pub layer_starts: Vec<usize>,
    /// `sum over layers of ceil(n_l / m)`.
    pub makespan: usize,
    pub m: usize,
}

impl LayeredAssignment {
    pub fn sets(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.placements.iter().map(|p| p.0).collect();
        v.sort_unstable();
        v
    }

    pub fn assignment(&self) -> Assignment {
        let mut per_machine = vec![Vec::new(); self.m];
        let mut order = self.placements.clone();
        order.sort_by_key(|&(s, j, t)| (j, t, s));
        for (s, j, _) in order {
            per_machine[j].push(s);
        }
        Assignment { per_machine }
    }

    /// Schedule of unit-cost sets starting at slot `offset`, with idle time
    /// for empty slots.
    pub fn to_schedule(&self, offset: usize) -> Schedule {
        let mut sched = Schedule::empty(self.m);
        let mut ends = vec![0usize; self.m];
        let mut order = self.placements.clone();
        order.sort_by_key(|&(s, j, t)| (j, t, s));
        for (s, j, t) in order {
            let start = offset + t;
            let idle = start - ends[j];
            sched.push(j, s, Rational::from_integer(idle as i128));
            ends[j] = start + 1;
        }
        sched
    }
}

/// Groups a precedence-closed family by depth; layer `l`'s `n_l` sets fill
/// `ceil(n_l / m)` slots round-robin.
pub fn layered_assign(family: &[usize], dag: &PrecedenceDag, m: usize) -> Result<LayeredAssignment> {
    if m == 0 {
        return Err(Error::Validation("m: at least one machine required".into()));
    }
    for (i, &s) in family.iter().enumerate() {
        if s >= dag.k() {
            return Err(Error::InvalidIndex {
                path: format!("family[{i}]"),
                index: s,
                limit: dag.k(),
            });
        }
    }
    if let Some((set, missing)) = dag.closure_violation(family) {
        return Err(Error::NotClosed { set, missing });
    }
    let mut sorted = family.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let layers = sorted.iter().map(|&s| dag.depth(s)).max().unwrap_or(0);
    let mut by_layer = vec![Vec::new(); layers];
    for &s in &sorted {
        by_layer[dag.depth(s) - 1].push(s);
    }
    let mut placements = Vec::with_capacity(sorted.len());
    let mut layer_starts = Vec::with_capacity(layers);
    let mut slot = 0;
    for layer in &by_layer {
        layer_starts.push(slot);
        for (i, &s) in layer.iter().enumerate() {
            placements.push((s, i % m, slot + i / m));
        }
        slot += layer.len().div_ceil(m);
    }
    Ok(LayeredAssignment {
        placements,
        layer_starts,
        makespan: slot,
        m,
    })
}

/// Which family a precedence-closed candidate was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Candidate {
    /// All sets of depth at most `h`.
    Depth(usize),
    /// Closure of one set.
    Closure(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcdsOutcome {
    pub layered: LayeredAssignment,
    pub density: DensityValue,
    pub candidate: Candidate,
    pub candidates_evaluated: usize,
}

fn require_unit_dag(inst: &ProblemInstance) -> Result<PrecedenceDag> {
    if !matches!(inst.cost_model(), CostModel::Unit) {
        return Err(Error::WrongCostModel { expected: "unit" });
    }
    if inst.dag_edges().is_none() {
        return Err(Error::MissingDag);
    }
    PrecedenceDag::from_instance(inst)
}

/// Densest precedence-closed candidate among the depth prefixes and the set
/// closures of the sets not in `scheduled`.
///
/// Scheduled sets count as already finished, so candidates are built on the
/// graph induced by the others. Ties prefer the shorter makespan, then the
/// earlier candidate.
pub fn pcds(inst: &ProblemInstance, remaining: &ElementSet, scheduled: Option<&[bool]>) -> Result<PcdsOutcome> {
    let full = require_unit_dag(inst)?;
    let active: Vec<usize> = (0..inst.k())
        .filter(|&s| !scheduled.is_some_and(|d| d.get(s).copied().unwrap_or(false)))
        .collect();
    let (dag, map) = full.induced(&active);
    let m = inst.m();

    let mut families: Vec<(Candidate, Vec<usize>)> = Vec::new();
    for h in 1..=dag.max_depth() {
        families.push((Candidate::Depth(h), (0..dag.k()).filter(|&v| dag.depth(v) <= h).collect()));
    }
    for v in 0..dag.k() {
        families.push((Candidate::Closure(map[v]), dag.closure(v)?));
    }

    let mut best: Option<(LayeredAssignment, DensityValue, Candidate)> = None;
    for (cand, fam) in &families {
        let original: Vec<usize> = fam.iter().map(|&v| map[v]).collect();
        let covered = coverage(inst, &original, remaining)?.count_ones(..) as u64;
        if covered == 0 {
            continue;
        }
        let local = layered_assign(fam, &dag, m)?;
        let d = DensityValue::new(covered, Rational::from_integer(local.makespan as i128));
        let better = match &best {
            None => true,
            Some((l, bd, _)) => d > *bd || (d == *bd && local.makespan < l.makespan),
        };
        if better {
            let layered = LayeredAssignment {
                placements: local.placements.iter().map(|&(v, j, t)| (map[v], j, t)).collect(),
                ..local
            };
            best = Some((layered, d, *cand));
        }
    }
    let (layered, density, candidate) = best.ok_or(Error::NoCoverage)?;
    Ok(PcdsOutcome {
        layered,
        density,
        candidate,
        candidates_evaluated: families.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrecedenceIteration {
    pub sets: Vec<usize>,
    /// Slot at which the iteration's layers begin.
    pub start: usize,
    pub makespan: usize,
    pub newly_covered: usize,
    pub remaining_before: usize,
}

/// Greedy scheduling with [`pcds`] as the batch oracle. Each batch starts
/// once every machine has finished the previous one.
pub fn pmssc_precedence(inst: &ProblemInstance) -> Result<(Schedule, Vec<PrecedenceIteration>)> {
    require_unit_dag(inst)?;
    inst.ensure_solvable()?;
    let m = inst.m();
    let mut remaining = inst.universe();
    let mut scheduled = vec![false; inst.k()];
    let mut sched = Schedule::empty(m);
    let mut ends = vec![0usize; m];
    let mut trace = Vec::new();
    while remaining.count_ones(..) > 0 {
        let before = remaining.count_ones(..);
        let out = pcds(inst, &remaining, Some(&scheduled))?;
        if out.density.covered == 0 {
            return Err(Error::StalledOracle { remaining: before });
        }
        let barrier = ends.iter().copied().max().unwrap_or(0);
        let mut placements = out.layered.placements.clone();
        placements.sort_by_key(|&(s, j, t)| (j, t, s));
        for &(s, j, t) in &placements {
            let start = barrier + t;
            sched.push(j, s, Rational::from_integer((start - ends[j]) as i128));
            ends[j] = start + 1;
            scheduled[s] = true;
            remaining.difference_with(inst.set_bits(s));
        }
        trace.push(PrecedenceIteration {
            sets: out.layered.sets(),
            start: barrier,
            makespan: out.layered.makespan,
            newly_covered: before - remaining.count_ones(..),
            remaining_before: before,
        });
    }
    Ok((sched, trace))
}

/// Checks that every scheduled set starts after all its predecessors finish.
pub fn check_precedence(inst: &ProblemInstance, sched: &Schedule) -> Result<()> {
    let dag = PrecedenceDag::from_instance(inst)?;
    let timing = sched.timing(inst)?;
    for (s, t) in timing.iter().enumerate() {
        let Some((start, _)) = t else { continue };
        for &p in dag.preds(s) {
            match &timing[p] {
                Some((_, finish)) if finish <= start => {}
                _ => return Err(Error::NotClosed { set: s, missing: p }),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::evaluate_schedule_cost;

    fn chain3() -> PrecedenceDag {
        PrecedenceDag::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn diamond() -> PrecedenceDag {
        PrecedenceDag::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn closures() {
        let iso = PrecedenceDag::new(2, &[]).unwrap();
        assert_eq!(iso.closure(1).unwrap(), vec![1]);
        assert_eq!(chain3().closure(2).unwrap(), vec![0, 1, 2]);
        assert_eq!(diamond().closure(3).unwrap(), vec![0, 1, 2, 3]);
        assert!(matches!(iso.closure(5), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn depths() {
        let d = diamond();
        assert_eq!((0..4).map(|v| d.depth(v)).collect::<Vec<_>>(), vec![1, 2, 2, 3]);
        assert_eq!(d.max_depth(), 3);
    }

    #[test]
    fn cycle_rejected() {
        assert!(matches!(PrecedenceDag::new(2, &[(0, 1), (1, 0)]), Err(Error::CyclicDag(_))));
    }

    #[test]
    fn layered_examples() {
        let free = PrecedenceDag::new(4, &[]).unwrap();
        assert_eq!(layered_assign(&[0, 1, 2, 3], &free, 2).unwrap().makespan, 2);
        assert_eq!(layered_assign(&[0, 1, 2], &chain3(), 5).unwrap().makespan, 3);
        let l = layered_assign(&[0, 1, 2, 3], &diamond(), 2).unwrap();
        assert_eq!(l.makespan, 3);
        assert_eq!(l.layer_starts, vec![0, 1, 2]);
    }

    #[test]
    fn layered_rejects_open_family() {
        assert_eq!(
            layered_assign(&[1, 2], &chain3(), 1).unwrap_err(),
            Error::NotClosed { set: 1, missing: 0 }
        );
    }

    fn chain_instance(n: usize) -> ProblemInstance {
        ProblemInstance::new(n, vec![vec![], (0..n).collect()], 1, CostModel::Unit, Some(vec![(0, 1)])).unwrap()
    }

    fn diamond_instance(n: usize) -> ProblemInstance {
        ProblemInstance::new(
            n,
            vec![vec![], vec![], vec![], (0..n).collect()],
            2,
            CostModel::Unit,
            Some(vec![(0, 1), (0, 2), (1, 3), (2, 3)]),
        )
        .unwrap()
    }

    #[test]
    fn pcds_independent_sets_one_slot() {
        let inst = ProblemInstance::new(4, vec![vec![0], vec![1], vec![2, 3]], 3, CostModel::Unit, Some(vec![])).unwrap();
        let out = pcds(&inst, &inst.universe(), None).unwrap();
        assert_eq!(out.density.value(), Rational::from_integer(4));
        assert_eq!(out.candidate, Candidate::Depth(1));
        assert_eq!(out.candidates_evaluated, 1 + 3);
    }

    #[test]
    fn pcds_chain() {
        let inst = chain_instance(6);
        let out = pcds(&inst, &inst.universe(), None).unwrap();
        assert_eq!(out.density.value(), Rational::from_integer(3));
        assert_eq!(out.layered.sets(), vec![0, 1]);
        assert_eq!(out.candidates_evaluated, 2 + 2);
    }

    #[test]
    fn precedence_schedules() {
        let (sched, _) = pmssc_precedence(&chain_instance(5)).unwrap();
        assert_eq!(sched.per_machine, vec![vec![0, 1]]);
        assert_eq!(evaluate_schedule_cost(&chain_instance(5), &sched).unwrap().total, Rational::from_integer(10));

        let inst = diamond_instance(4);
        let (sched, _) = pmssc_precedence(&inst).unwrap();
        check_precedence(&inst, &sched).unwrap();
        assert_eq!(evaluate_schedule_cost(&inst, &sched).unwrap().total, Rational::from_integer(12));
    }

    #[test]
    fn barrier_respects_cross_machine_order() {
        let inst = ProblemInstance::new(
            3,
            vec![vec![0], vec![1], vec![2]],
            2,
            CostModel::Unit,
            Some(vec![(0, 2), (1, 2)]),
        )
        .unwrap();
        let (sched, _) = pmssc_precedence(&inst).unwrap();
        check_precedence(&inst, &sched).unwrap();
    }

    #[test]
    fn check_precedence_detects_violation() {
        let inst = chain_instance(2);
        let bad = Schedule::new(vec![vec![1, 0]]);
        assert!(check_precedence(&inst, &bad).is_err());
    }
}
