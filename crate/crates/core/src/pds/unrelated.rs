//! Unrelated machines via the coverage LP at power-of-two budgets.

use num_traits::Zero;

use super::{candidates, covering_density, finish, keep_best, BudgetLadder, GuessRecord, PdsOutcome, PdsParams};
use crate::error::{Error, Result};
use crate::instance::{CostModel, ElementSet, ProblemInstance};
use crate::pmc::{pmc_solve_on, PmcParams};
use crate::rational::{Cost, Rational};

/// For every power-of-two guess `B`, rounds the coverage LP with `B_j = B`
/// and keeps the densest result.
pub fn pds_unrelated(inst: &ProblemInstance, remaining: &ElementSet, params: &PdsParams) -> Result<PdsOutcome> {
    params.check()?;
    if !matches!(inst.cost_model(), CostModel::Unrelated { .. }) {
        return Err(Error::WrongCostModel { expected: "unrelated" });
    }
    let cand = candidates(inst, remaining, None);
    let finite: Vec<Rational> = cand
        .iter()
        .flat_map(|&s| (0..inst.m()).filter_map(move |j| inst.cost(s, j).finite()))
        .collect();
    if finite.is_empty() {
        return Err(Error::NoCoverage);
    }
    let lo = finite
        .iter()
        .copied()
        .filter(|c| *c > Rational::zero())
        .min()
        .ok_or_else(|| Error::Validation("no positive cost among candidate sets".into()))?;
    let hi = finite.iter().fold(Rational::zero(), |a, c| a + c);
    let ladder = BudgetLadder::new(2.0, lo, hi)?;

    // Sets that cover nothing remaining are priced out of the LP.
    let mut is_cand = vec![false; inst.k()];
    for &s in &cand {
        is_cand[s] = true;
    }
    let matrix = (0..inst.k())
        .map(|s| (0..inst.m()).map(|j| if is_cand[s] { inst.cost(s, j) } else { Cost::Infinite }).collect())
        .collect();
    let sub = ProblemInstance::new(inst.n(), inst.sets().to_vec(), inst.m(), CostModel::Unrelated { matrix }, None)?;
    let pmc = PmcParams {
        r_cap: params.r_cap,
        ..PmcParams::poly(params.epsilon, params.seed)
    };

    let mut best = None;
    let mut records = Vec::new();
    for b in ladder.guesses() {
        let budgets = vec![b; inst.m()];
        let res = match pmc_solve_on(&sub, remaining, &budgets, &pmc) {
            Ok(res) => res,
            Err(e @ Error::NoIterationKept { .. }) => {
                records.push(GuessRecord {
                    budget: b,
                    density: None,
                    error: Some(e),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let d = covering_density(inst, &res.assignment, remaining)?;
        records.push(GuessRecord {
            budget: b,
            density: d,
            error: None,
        });
        if let Some(d) = d {
            keep_best(&mut best, res.assignment, d, b);
        }
    }
    finish(best, records)
}
