//! Densest precedence-closed family with its shortest unit-slot schedule.

use std::collections::HashMap;

use super::{NodeCounter, OracleLimits};
use crate::error::{Error, Result};
use crate::instance::{CostModel, ElementSet, ProblemInstance};
use crate::precedence::{LayeredAssignment, PrecedenceDag};
use crate::rational::{DensityValue, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct PrecedenceOptimum {
    /// Optimal family in minimum-makespan slot placement.
    pub schedule: LayeredAssignment,
    pub density: DensityValue,
}

/// Enumerates every precedence-closed family and schedules each with the
/// fewest unit slots; returns the densest, ties toward fewer sets.
pub fn exact_pds_precedence(
    inst: &ProblemInstance,
    remaining: &ElementSet,
    limits: &OracleLimits,
) -> Result<PrecedenceOptimum> {
    limits.check(inst)?;
    if inst.k() > 31 {
        return Err(Error::LimitsExceeded(format!("k = {} exceeds 31", inst.k())));
    }
    if !matches!(inst.cost_model(), CostModel::Unit) {
        return Err(Error::WrongCostModel { expected: "unit" });
    }
    let dag = PrecedenceDag::from_instance(inst)?;
    let k = inst.k();
    let pred_mask: Vec<u32> = (0..k).map(|s| dag.preds(s).iter().fold(0u32, |a, &p| a | (1 << p))).collect();
    let mut nodes = NodeCounter::new(limits.node_budget);

    let mut families = Vec::new();
    closed_families(&dag, &pred_mask, 0, 0, &mut families);

    let mut best: Option<(DensityValue, u32, u32)> = None;
    for &fam in &families {
        nodes.tick()?;
        let mut cov = ElementSet::with_capacity(inst.n());
        for s in (0..k).filter(|&s| fam >> s & 1 == 1) {
            cov.union_with(inst.set_bits(s));
        }
        cov.intersect_with(remaining);
        let covered = cov.count_ones(..) as u64;
        if covered == 0 {
            continue;
        }
        let mut memo = HashMap::new();
        let slots = min_slots(fam, 0, &pred_mask, inst.m(), &mut memo, &mut nodes)?;
        let d = DensityValue::new(covered, Rational::from_integer(slots as i128));
        let better = match best {
            None => true,
            Some((bd, bf, _)) => d > bd || (d == bd && fam.count_ones() < bf.count_ones()),
        };
        if better {
            best = Some((d, fam, slots));
        }
    }
    let (density, fam, _) = best.ok_or(Error::NoCoverage)?;
    let mut memo = HashMap::new();
    min_slots(fam, 0, &pred_mask, inst.m(), &mut memo, &mut nodes)?;
    let schedule = reconstruct(fam, &pred_mask, inst.m(), &memo);
    Ok(PrecedenceOptimum { schedule, density })
}

/// All downward-closed subsets, deciding sets in topological order.
fn closed_families(dag: &PrecedenceDag, pred_mask: &[u32], i: usize, fam: u32, out: &mut Vec<u32>) {
    let order = dag.topological_order();
    if i == order.len() {
        if fam != 0 {
            out.push(fam);
        }
        return;
    }
    let s = order[i];
    closed_families(dag, pred_mask, i + 1, fam, out);
    if pred_mask[s] & !fam == 0 {
        closed_families(dag, pred_mask, i + 1, fam | (1 << s), out);
    }
}

fn available(fam: u32, done: u32, pred_mask: &[u32]) -> Vec<usize> {
    (0..pred_mask.len())
        .filter(|&s| fam >> s & 1 == 1 && done >> s & 1 == 0 && pred_mask[s] & !done == 0)
        .collect()
}

/// Every `size`-subset of `items` as a bitmask.
fn subsets(items: &[usize], size: usize) -> Vec<u32> {
    let mut out = Vec::new();
    fn rec(items: &[usize], size: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
        if size == 0 {
            out.push(acc);
            return;
        }
        for i in start..=items.len() - size {
            rec(items, size - 1, i + 1, acc | (1 << items[i]), out);
        }
    }
    rec(items, size, 0, 0, &mut out);
    out
}

/// Fewest slots to finish `fam` from `done`. Filling every slot with as many
/// available sets as machines allow loses nothing: an idle machine next to
/// an available set can always take it earlier.
fn min_slots(
    fam: u32,
    done: u32,
    pred_mask: &[u32],
    m: usize,
    memo: &mut HashMap<u32, (u32, u32)>,
    nodes: &mut NodeCounter,
) -> Result<u32> {
    if done == fam {
        return Ok(0);
    }
    if let Some(&(v, _)) = memo.get(&done) {
        return Ok(v);
    }
    nodes.tick()?;
    let avail = available(fam, done, pred_mask);
    let mut best = (u32::MAX, 0);
    for pick in subsets(&avail, avail.len().min(m)) {
        let v = 1 + min_slots(fam, done | pick, pred_mask, m, memo, nodes)?;
        if v < best.0 {
            best = (v, pick);
        }
    }
    memo.insert(done, best);
    Ok(best.0)
}

fn reconstruct(fam: u32, pred_mask: &[u32], m: usize, memo: &HashMap<u32, (u32, u32)>) -> LayeredAssignment {
    let mut placements = Vec::new();
    let mut done = 0u32;
    let mut slot = 0;
    while done != fam {
        let pick = memo[&done].1;
        let sets: Vec<usize> = (0..pred_mask.len()).filter(|&s| pick >> s & 1 == 1).collect();
        for (j, &s) in sets.iter().enumerate() {
            placements.push((s, j, slot));
        }
        done |= pick;
        slot += 1;
    }
    LayeredAssignment {
        placements,
        layer_starts: (0..slot).collect(),
        makespan: slot,
        m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_pds;

    fn unit(n: usize, sets: Vec<Vec<usize>>, m: usize, dag: Vec<(usize, usize)>) -> ProblemInstance {
        ProblemInstance::new(n, sets, m, CostModel::Unit, Some(dag)).unwrap()
    }

    #[test]
    fn chain() {
        let inst = unit(4, vec![vec![], vec![0, 1, 2, 3]], 1, vec![(0, 1)]);
        let opt = exact_pds_precedence(&inst, &inst.universe(), &OracleLimits::default()).unwrap();
        assert_eq!(opt.density.value(), Rational::from_integer(2));
    }

    #[test]
    fn diamond() {
        let inst = unit(6, vec![vec![], vec![], vec![], (0..6).collect()], 2, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let opt = exact_pds_precedence(&inst, &inst.universe(), &OracleLimits::default()).unwrap();
        assert_eq!(opt.density.value(), Rational::from_integer(2));
        assert_eq!(opt.schedule.makespan, 3);
    }

    #[test]
    fn empty_dag_matches_exact_pds() {
        let inst = unit(5, vec![vec![0, 1], vec![2], vec![3, 4], vec![0, 4]], 2, vec![]);
        let opt = exact_pds_precedence(&inst, &inst.universe(), &OracleLimits::default()).unwrap();
        let (_, d) = exact_pds(&inst, &inst.universe(), &OracleLimits::default()).unwrap();
        assert_eq!(opt.density, d);
    }

    #[test]
    fn slot_search_beats_layering() {
        // 0 -> 2 with 1 and 3 free: layers {0,1,3} and {2} take 3 slots on
        // two machines, while {0,1} then {2,3} takes 2.
        let inst = unit(4, vec![vec![0], vec![1], vec![2], vec![3]], 2, vec![(0, 2)]);
        let opt = exact_pds_precedence(&inst, &inst.universe(), &OracleLimits::default()).unwrap();
        assert_eq!(opt.density.value(), Rational::from_integer(2));
    }
}
