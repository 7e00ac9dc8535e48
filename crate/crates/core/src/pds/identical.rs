//! Identical machines and the unit-cost special case.

use num_traits::Zero;

use super::{candidates, covering_density, finish, keep_best, lpt_distribute, BudgetLadder, GuessRecord, PdsOutcome, PdsParams};
use crate::error::{Error, Result};
use crate::instance::{CostModel, ElementSet, ProblemInstance};
use crate::maxcov::{budgeted_max_coverage, MaxCovMode};
use crate::rational::Rational;
use crate::schedule::Assignment;

/// Budget ladder over `1 + delta`; at each guess `B`, budgeted max coverage
/// with budget `m * B` on the sets costing at most `B`, spread over machines
/// largest first.
pub fn pds_identical(inst: &ProblemInstance, remaining: &ElementSet, params: &PdsParams) -> Result<PdsOutcome> {
    let costs = identical_costs(inst)?;
    solve(inst, remaining, params, &costs, false)
}

/// As [`pds_identical`] with all costs 1 and at most `ceil(|C| / m)` sets per
/// machine.
pub fn pds_unit(inst: &ProblemInstance, remaining: &ElementSet, params: &PdsParams) -> Result<PdsOutcome> {
    if !matches!(inst.cost_model(), CostModel::Unit) {
        return Err(Error::WrongCostModel { expected: "unit" });
    }
    let costs = vec![Rational::from_integer(1); inst.k()];
    solve(inst, remaining, params, &costs, true)
}

fn identical_costs(inst: &ProblemInstance) -> Result<Vec<Rational>> {
    match inst.cost_model() {
        CostModel::Unit => Ok(vec![Rational::from_integer(1); inst.k()]),
        CostModel::Identical { base_costs } => Ok(base_costs.iter().map(|&c| Rational::from_integer(c as i128)).collect()),
        _ => Err(Error::WrongCostModel { expected: "identical" }),
    }
}

fn solve(
    inst: &ProblemInstance,
    remaining: &ElementSet,
    params: &PdsParams,
    costs: &[Rational],
    unit: bool,
) -> Result<PdsOutcome> {
    params.check()?;
    let cand = candidates(inst, remaining, None);
    if cand.is_empty() {
        return Err(Error::NoCoverage);
    }
    if let Some(&s) = cand.iter().find(|&&s| costs[s] <= Rational::zero()) {
        return Err(Error::Validation(format!("set {s} has non-positive cost")));
    }
    let m = inst.m();
    let mi = Rational::from_integer(m as i128);
    let lo = cand.iter().map(|&s| costs[s]).min().expect("nonempty");
    let hi = cand.iter().fold(Rational::zero(), |a, &s| a + costs[s]) * mi;
    let ladder = BudgetLadder::new(1.0 + params.delta(), lo, hi)?;
    let mode = params.maxcov.unwrap_or_else(|| MaxCovMode::default_for(cand.len()));

    let mut best = None;
    let mut records = Vec::new();
    for b in ladder.guesses() {
        let eligible: Vec<usize> = cand.iter().copied().filter(|&s| costs[s] <= b).collect();
        if eligible.is_empty() {
            records.push(GuessRecord {
                budget: b,
                density: None,
                error: None,
            });
            continue;
        }
        let bits: Vec<ElementSet> = eligible.iter().map(|&s| inst.set_bits(s).clone()).collect();
        let ecosts: Vec<Rational> = eligible.iter().map(|&s| costs[s]).collect();
        let chosen = budgeted_max_coverage(remaining, &bits, &ecosts, b * mi, mode);
        let picked: Vec<usize> = chosen.chosen.iter().map(|&i| eligible[i]).collect();
        let per_machine = if unit {
            round_robin(&picked, m)
        } else {
            let items: Vec<(usize, Vec<Rational>)> = picked.iter().map(|&s| (s, vec![costs[s]; m])).collect();
            lpt_distribute(&items, m).0
        };
        let asg = Assignment { per_machine };
        let d = covering_density(inst, &asg, remaining)?;
        records.push(GuessRecord {
            budget: b,
            density: d,
            error: None,
        });
        if let Some(d) = d {
            keep_best(&mut best, asg, d, b);
        }
    }
    finish(best, records)
}

/// Deals sets out in order, so no machine gets more than `ceil(len / m)`.
fn round_robin(sets: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut per = vec![Vec::new(); m];
    for (i, &s) in sets.iter().enumerate() {
        per[i % m].push(s);
    }
    per
}
