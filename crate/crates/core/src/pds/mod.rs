//! Parallel Densest Subfamily: an assignment maximizing covered remaining
//! elements per unit of makespan.

mod identical;
mod related;
mod unrelated;

use std::f64::consts::E;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ElementSet, ProblemInstance};
use crate::maxcov::MaxCovMode;
use crate::oracle::{exact_pds, OracleLimits};
use crate::rational::{ceil_to_grid, to_f64, DensityValue, Rational};
use crate::schedule::{density, Assignment};

pub use identical::{pds_identical, pds_unit};
pub use related::{pds_related, reduce_related, RelatedReduction};
pub use unrelated::pds_unrelated;

/// Denominator of the grid budget guesses are rounded up to.
pub const LADDER_GRID: i128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdsParams {
    pub epsilon: f64,
    pub seed: u64,
    /// Max-coverage subroutine; chosen from the candidate count when unset.
    pub maxcov: Option<MaxCovMode>,
    /// Rounding iteration cap passed to the coverage LP.
    pub r_cap: Option<u64>,
}

impl PdsParams {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        PdsParams {
            epsilon,
            seed,
            maxcov: None,
            r_cap: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }

    /// `delta = eps * 2e / (e - 1)`.
    pub fn delta(&self) -> f64 {
        self.epsilon * 2.0 * E / (E - 1.0)
    }

    /// `kappa = delta / (delta + 16)`.
    pub fn kappa(&self) -> f64 {
        let d = self.delta();
        d / (d + 16.0)
    }
}

/// Guaranteed fraction of the optimum density on identical machines.
pub fn identical_ratio(epsilon: f64) -> f64 {
    (E - 1.0) / (2.0 * E + epsilon * (E - 1.0))
}

/// Guaranteed fraction of the optimum density with unit costs.
pub fn unit_ratio(epsilon: f64) -> f64 {
    (E - 1.0) / (E + epsilon * (E - 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GuessRecord {
    pub budget: Rational,
    pub density: Option<DensityValue>,
    pub error: Option<Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdsOutcome {
    pub assignment: Assignment,
    pub density: DensityValue,
    /// Winning budget guess; `None` for exact solvers.
    pub guess: Option<Rational>,
    pub guesses: Vec<GuessRecord>,
}

/// Geometric budget guesses `base^i` with `lo <= base^i <= base * hi`, each
/// rounded up to a multiple of `1 / LADDER_GRID`.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetLadder {
    pub base: f64,
    pub lo: Rational,
    pub hi: Rational,
}

impl BudgetLadder {
    pub fn new(base: f64, lo: Rational, hi: Rational) -> Result<Self> {
        if !(base > 1.0 && base.is_finite()) {
            return Err(Error::Domain(format!("ladder base must exceed 1, got {base}")));
        }
        if lo <= Rational::zero() || hi < lo {
            return Err(Error::Domain(format!("ladder range [{lo}, {hi}] is empty")));
        }
        Ok(BudgetLadder { base, lo, hi })
    }

    pub fn guesses(&self) -> Vec<Rational> {
        let (lo, top) = (to_f64(&self.lo), self.base * to_f64(&self.hi));
        let mut i = (lo.ln() / self.base.ln()).floor() as i32 - 1;
        let mut out: Vec<Rational> = Vec::new();
        loop {
            let v = self.base.powi(i);
            if v > top * (1.0 + 1e-12) {
                break;
            }
            let g = ceil_to_grid(v, LADDER_GRID);
            if g >= self.lo && out.last() != Some(&g) {
                out.push(g);
            }
            i += 1;
        }
        out
    }
}

/// Sets that still cover something in `remaining` and are not excluded.
pub(crate) fn candidates(inst: &ProblemInstance, remaining: &ElementSet, excluded: Option<&[bool]>) -> Vec<usize> {
    (0..inst.k())
        .filter(|&s| !excluded.is_some_and(|e| e.get(s).copied().unwrap_or(false)))
        .filter(|&s| !inst.set_bits(s).is_disjoint(remaining))
        .collect()
}

/// Largest-cost-first placement onto the least loaded machine.
///
/// `items` are `(set, cost per machine)`; returns per-machine set lists and
/// loads. Ties go to the lower set index and lower machine index.
pub fn lpt_distribute(items: &[(usize, Vec<Rational>)], machines: usize) -> (Vec<Vec<usize>>, Vec<Rational>) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    let key = |i: usize| items[i].1.iter().min().copied().unwrap_or_else(Rational::zero);
    order.sort_by(|&a, &b| key(b).cmp(&key(a)).then(items[a].0.cmp(&items[b].0)));
    let mut per = vec![Vec::new(); machines];
    let mut loads = vec![Rational::zero(); machines];
    for i in order {
        let j = (0..machines).min_by(|&a, &b| loads[a].cmp(&loads[b]).then(a.cmp(&b))).expect("at least one machine");
        per[j].push(items[i].0);
        loads[j] += items[i].1[j];
    }
    (per, loads)
}

/// Keeps `candidate` if it is strictly denser than `best`.
pub(crate) fn keep_best(
    best: &mut Option<(Assignment, DensityValue, Rational)>,
    candidate: Assignment,
    d: DensityValue,
    guess: Rational,
) {
    if best.as_ref().is_none_or(|b| d > b.1) {
        *best = Some((candidate, d, guess));
    }
}

pub(crate) fn finish(best: Option<(Assignment, DensityValue, Rational)>, guesses: Vec<GuessRecord>) -> Result<PdsOutcome> {
    match best {
        Some((assignment, density, guess)) => Ok(PdsOutcome {
            assignment,
            density,
            guess: Some(guess),
            guesses,
        }),
        None => Err(guesses
            .into_iter()
            .rev()
            .find_map(|g| g.error)
            .unwrap_or(Error::NoCoverage)),
    }
}

/// Density of `asg` against `remaining`, or `None` when it covers nothing.
pub(crate) fn covering_density(
    inst: &ProblemInstance,
    asg: &Assignment,
    remaining: &ElementSet,
) -> Result<Option<DensityValue>> {
    if asg.is_empty() {
        return Ok(None);
    }
    let d = density(inst, asg, remaining)?;
    Ok((d.covered > 0).then_some(d))
}

/// The PDS solver used as the greedy scheduler's oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PdsOracle {
    Identical,
    Unit,
    Related,
    Unrelated,
    Exact,
}

impl PdsOracle {
    pub fn solve(
        self,
        inst: &ProblemInstance,
        remaining: &ElementSet,
        params: &PdsParams,
        limits: &OracleLimits,
    ) -> Result<PdsOutcome> {
        match self {
            PdsOracle::Identical => pds_identical(inst, remaining, params),
            PdsOracle::Unit => pds_unit(inst, remaining, params),
            PdsOracle::Related => pds_related(inst, remaining, params),
            PdsOracle::Unrelated => pds_unrelated(inst, remaining, params),
            PdsOracle::Exact => {
                let (assignment, density) = exact_pds(inst, remaining, limits)?;
                Ok(PdsOutcome {
                    assignment,
                    density,
                    guess: None,
                    guesses: Vec::new(),
                })
            }
        }
    }
}
