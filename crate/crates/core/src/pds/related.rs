//! Related machines via reduction to few machine groups.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{candidates, covering_density, finish, keep_best, lpt_distribute, BudgetLadder, GuessRecord, PdsOutcome, PdsParams};
use crate::error::{Error, Result};
use crate::instance::{CostModel, ElementSet, ProblemInstance};
use crate::pmc::{pmc_solve_on, PmcParams};
use crate::rational::{ceil_to_grid, to_f64, Cost, Rational};
use crate::schedule::Assignment;

/// Denominator of the grid group multipliers are rounded up to.
pub const MULTIPLIER_GRID: i128 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelatedReduction {
    pub kappa: f64,
    /// `ceil(log_{1+kappa}(m / kappa))`.
    pub t: usize,
    pub kept_machines: Vec<usize>,
    pub discarded_machines: Vec<usize>,
    /// `groups[p]` holds machines whose rounded cost multiplier is
    /// `(1 + kappa)^p`; may be empty.
    pub groups: Vec<Vec<usize>>,
    /// `(1 + kappa)^p`, rounded up to the multiplier grid.
    #[serde(serialize_with = "crate::io::ser_rationals")]
    pub multipliers: Vec<Rational>,
    /// Group behind each machine of the auxiliary instance.
    pub aux_groups: Vec<usize>,
}

impl RelatedReduction {
    pub fn nonempty_groups(&self) -> usize {
        self.aux_groups.len()
    }
}

/// Normalizes speeds to the fastest machine, drops machines with normalized
/// speed at most `kappa / m`, rounds the remaining cost multipliers up to
/// powers of `1 + kappa` and builds an unrelated instance with one machine per
/// nonempty group and `c(S, p) = multiplier_p * c(S)`, where `c(S)` is the
/// cost on the fastest machine.
pub fn reduce_related(inst: &ProblemInstance, kappa: f64) -> Result<(RelatedReduction, ProblemInstance)> {
    let CostModel::Related { base_costs, speeds } = inst.cost_model() else {
        return Err(Error::WrongCostModel { expected: "related" });
    };
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if let Some(j) = speeds.iter().position(|s| *s <= Rational::zero()) {
        return Err(Error::Validation(format!("speeds[{j}]: non-positive speed")));
    }
    let m = inst.m();
    let fastest = *speeds.iter().max().expect("m >= 1");
    let threshold = kappa / m as f64;
    let base = (1.0 + kappa).ln();
    let mut t = ((m as f64 / kappa).ln() / base).ceil().max(1.0) as usize;

    let mut kept = Vec::new();
    let mut discarded = Vec::new();
    let mut level = Vec::new();
    for (j, s) in speeds.iter().enumerate() {
        let normalized = *s / fastest;
        if to_f64(&normalized) <= threshold {
            discarded.push(j);
            continue;
        }
        let multiplier = to_f64(&(fastest / *s));
        let q = ((multiplier.ln() / base) - 1e-9).ceil().max(0.0) as usize;
        kept.push(j);
        level.push(q);
        t = t.max(q + 1);
    }
    let mut groups = vec![Vec::new(); t];
    for (&j, &q) in kept.iter().zip(&level) {
        groups[q].push(j);
    }
    let multipliers: Vec<Rational> = (0..t)
        .map(|p| if p == 0 { Rational::one() } else { ceil_to_grid((1.0 + kappa).powi(p as i32), MULTIPLIER_GRID) })
        .collect();
    let aux_groups: Vec<usize> = (0..t).filter(|&p| !groups[p].is_empty()).collect();

    let matrix = base_costs
        .iter()
        .map(|&c| {
            let c = Rational::from_integer(c as i128) / fastest;
            aux_groups.iter().map(|&p| Cost::Finite(multipliers[p] * c)).collect()
        })
        .collect();
    let aux = ProblemInstance::new(
        inst.n(),
        inst.sets().to_vec(),
        aux_groups.len(),
        CostModel::Unrelated { matrix },
        None,
    )?;
    Ok((
        RelatedReduction {
            kappa,
            t,
            kept_machines: kept,
            discarded_machines: discarded,
            groups,
            multipliers,
            aux_groups,
        },
        aux,
    ))
}

/// Budget ladder over `1 + kappa`; at each guess `B` the coverage LP runs on
/// the group instance with budgets `|G_p| * B` and costs above `B` removed,
/// and each group's sets are spread over its machines largest first.
pub fn pds_related(inst: &ProblemInstance, remaining: &ElementSet, params: &PdsParams) -> Result<PdsOutcome> {
    params.check()?;
    let kappa = params.kappa();
    let (red, aux) = reduce_related(inst, kappa)?;
    let cand = candidates(inst, remaining, None);
    if cand.is_empty() {
        return Err(Error::NoCoverage);
    }
    let lo = cand
        .iter()
        .flat_map(|&s| (0..inst.m()).filter_map(move |j| inst.cost(s, j).finite()))
        .filter(|c| *c > Rational::zero())
        .min()
        .ok_or_else(|| Error::Validation("no positive cost among candidate sets".into()))?;
    let hi = cand
        .iter()
        .flat_map(|&s| (0..inst.m()).filter_map(move |j| inst.cost(s, j).finite()))
        .fold(Rational::zero(), |a, c| a + c);
    let ladder = BudgetLadder::new(1.0 + kappa, lo, hi)?;
    let pmc = PmcParams {
        r_cap: params.r_cap,
        ..PmcParams::fpt(kappa, kappa, params.seed)
    };
    let mut is_cand = vec![false; inst.k()];
    for &s in &cand {
        is_cand[s] = true;
    }

    let mut best = None;
    let mut records = Vec::new();
    for b in ladder.guesses() {
        let matrix: Vec<Vec<Cost>> = (0..inst.k())
            .map(|s| {
                (0..aux.m())
                    .map(|p| match aux.cost(s, p) {
                        Cost::Finite(c) if is_cand[s] && c <= b => Cost::Finite(c),
                        _ => Cost::Infinite,
                    })
                    .collect()
            })
            .collect();
        let guess_inst =
            ProblemInstance::new(inst.n(), inst.sets().to_vec(), aux.m(), CostModel::Unrelated { matrix }, None)?;
        let budgets: Vec<Rational> = red
            .aux_groups
            .iter()
            .map(|&g| Rational::from_integer(red.groups[g].len() as i128) * b)
            .collect();
        let res = match pmc_solve_on(&guess_inst, remaining, &budgets, &pmc) {
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
        let asg = lift(inst, &red, &res.assignment);
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

/// Spreads each group machine's sets over the group's real machines.
pub fn lift(inst: &ProblemInstance, red: &RelatedReduction, aux_asg: &Assignment) -> Assignment {
    let mut per_machine = vec![Vec::new(); inst.m()];
    for (p, sets) in aux_asg.per_machine.iter().enumerate() {
        let machines = &red.groups[red.aux_groups[p]];
        let items: Vec<(usize, Vec<Rational>)> = sets
            .iter()
            .map(|&s| {
                let costs = machines
                    .iter()
                    .map(|&j| inst.cost(s, j).finite().expect("related costs are finite"))
                    .collect();
                (s, costs)
            })
            .collect();
        let (per, _) = lpt_distribute(&items, machines.len());
        for (i, sets) in per.into_iter().enumerate() {
            per_machine[machines[i]] = sets;
        }
    }
    Assignment { per_machine }
}
