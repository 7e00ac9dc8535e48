//! Greedy scheduling: repeatedly append a dense batch of sets.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::oracle::OracleLimits;
use crate::pds::{PdsOracle, PdsParams};
use crate::rational::Rational;
use crate::schedule::{Assignment, Schedule};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyIteration {
    pub assignment: Assignment,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub makespan: Rational,
    pub newly_covered: usize,
    pub remaining_before: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub iterations: Vec<GreedyIteration>,
}

/// Runs `oracle` on the uncovered elements until everything is covered,
/// appending each batch to the end of its machines.
///
/// Sets in a batch that cover nothing new are dropped; the rest are ordered
/// per machine by new elements per unit cost, largest first.
pub fn pmssc_greedy(
    inst: &ProblemInstance,
    oracle: PdsOracle,
    params: &PdsParams,
    limits: &OracleLimits,
) -> Result<(Schedule, GreedyTrace)> {
    inst.ensure_solvable()?;
    let m = inst.m();
    let mut remaining = inst.universe();
    let mut sched = Schedule::empty(m);
    let mut trace = GreedyTrace::default();
    while remaining.count_ones(..) > 0 {
        let before = remaining.count_ones(..);
        let out = oracle.solve(inst, &remaining, params, limits)?;
        let mut per_machine = vec![Vec::new(); m];
        for (j, sets) in out.assignment.per_machine.iter().enumerate() {
            let mut keyed: Vec<(usize, usize, Rational)> = sets
                .iter()
                .map(|&s| {
                    let gain = inst.set_bits(s).intersection_count(&remaining);
                    let c = inst.cost(s, j).finite().ok_or(Error::InfiniteCost { set: s, machine: j });
                    c.map(|c| (s, gain, c))
                })
                .collect::<Result<_>>()?;
            keyed.retain(|&(_, gain, _)| gain > 0);
            // gain_a / c_a > gain_b / c_b, compared without division.
            keyed.sort_by(|a, b| {
                (b.2 * Rational::from_integer(a.1 as i128))
                    .cmp(&(a.2 * Rational::from_integer(b.1 as i128)))
                    .reverse()
                    .then(a.0.cmp(&b.0))
            });
            per_machine[j] = keyed.into_iter().map(|(s, _, _)| s).collect();
        }
        let batch = Assignment { per_machine };
        for (j, sets) in batch.per_machine.iter().enumerate() {
            for &s in sets {
                sched.push(j, s, Rational::zero());
                remaining.difference_with(inst.set_bits(s));
            }
        }
        let newly = before - remaining.count_ones(..);
        if newly == 0 {
            return Err(Error::StalledOracle { remaining: before });
        }
        trace.iterations.push(GreedyIteration {
            makespan: batch.makespan(inst)?,
            assignment: batch,
            newly_covered: newly,
            remaining_before: before,
        });
    }
    Ok((sched, trace))
}

/// `sum_i |R_i| * spr(F_i)`, an upper bound on the greedy schedule's cost.
pub fn upper_bound_from_trace(trace: &GreedyTrace) -> Rational {
    trace.iterations.iter().fold(Rational::zero(), |acc, it| {
        acc + Rational::from_integer(it.remaining_before as i128) * it.makespan
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::CostModel;
    use crate::schedule::evaluate_schedule_cost;

    fn r(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn t1_exact_oracle() {
        let inst = fixtures::t1(1);
        let (sched, trace) =
            pmssc_greedy(&inst, PdsOracle::Exact, &PdsParams::new(0.1, 0), &OracleLimits::default()).unwrap();
        assert_eq!(sched.per_machine, vec![vec![0, 1]]);
        assert_eq!(evaluate_schedule_cost(&inst, &sched).unwrap().total, r(4));
        assert_eq!(upper_bound_from_trace(&trace), r(4));
        let sizes: Vec<usize> = trace.iterations.iter().map(|i| i.remaining_before).collect();
        assert_eq!(sizes, vec![3, 1]);
    }

    #[test]
    fn single_full_set() {
        let inst = ProblemInstance::new(3, vec![vec![0, 1, 2]], 2, CostModel::Identical { base_costs: vec![7] }, None)
            .unwrap();
        let (sched, trace) =
            pmssc_greedy(&inst, PdsOracle::Identical, &PdsParams::new(0.1, 0), &OracleLimits::default()).unwrap();
        assert_eq!(trace.iterations.len(), 1);
        assert_eq!(evaluate_schedule_cost(&inst, &sched).unwrap().total, r(21));
        assert_eq!(upper_bound_from_trace(&trace), r(21));
    }

    #[test]
    fn uncoverable_rejected() {
        let inst = ProblemInstance::new(2, vec![vec![0]], 1, CostModel::Unit, None).unwrap();
        let err = pmssc_greedy(&inst, PdsOracle::Unit, &PdsParams::new(0.1, 0), &OracleLimits::default()).unwrap_err();
        assert!(matches!(err, Error::Uncoverable(_)));
    }

    #[test]
    fn figure_one_identical() {
        let inst = fixtures::fig1();
        let (sched, trace) =
            pmssc_greedy(&inst, PdsOracle::Identical, &PdsParams::new(0.1, 0), &OracleLimits::default()).unwrap();
        let cost = evaluate_schedule_cost(&inst, &sched).unwrap().total;
        assert!(cost <= upper_bound_from_trace(&trace));
        assert!(trace.iterations.iter().all(|i| i.newly_covered > 0));
    }
}
