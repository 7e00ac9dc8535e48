//! Parallel Maximum Coverage by LP relaxation and randomized rounding.
//!
//! Each rounding iteration places set `S` on machine `j` independently with
//! probability `x[S][j]` and is kept only if every machine's realized cost
//! stays within `(1 + delta) * B_j`. The best kept iteration wins.

use std::f64::consts::E;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ElementSet, ProblemInstance};
use crate::lp::{solve_lp, LinearProgram, LpSolution, LpStatus, Relation};
use crate::rational::{to_f64, Cost, Rational};
use crate::rng::stream_rng;
use crate::schedule::Assignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PmcMode {
    /// `delta = 4 ln m / ln ln m`, polynomial repetitions.
    Poly,
    /// `delta = mu`, repetitions grow exponentially with `m`.
    Fpt,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmcParams {
    pub mode: PmcMode,
    pub epsilon: f64,
    pub mu: f64,
    /// Maximum rounding iterations; defaults to ten times the polynomial term.
    pub r_cap: Option<u64>,
    pub seed: u64,
}

impl PmcParams {
    pub fn poly(epsilon: f64, seed: u64) -> Self {
        PmcParams {
            mode: PmcMode::Poly,
            epsilon,
            mu: 1.0,
            r_cap: None,
            seed,
        }
    }

    pub fn fpt(epsilon: f64, mu: f64, seed: u64) -> Self {
        PmcParams {
            mode: PmcMode::Fpt,
            epsilon,
            mu,
            r_cap: None,
            seed,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.mode == PmcMode::Fpt && !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Domain(format!("mu must be positive, got {}", self.mu)));
        }
        Ok(())
    }

    /// Allowed relative budget overrun.
    pub fn delta(&self, m: usize) -> f64 {
        match self.mode {
            PmcMode::Poly => poly_delta(m),
            PmcMode::Fpt => self.mu,
        }
    }

    pub fn repetitions(&self, n: usize, m: usize) -> RepetitionPlan {
        let poly_term = poly_repetitions(n, self.epsilon);
        let fpt_term = match self.mode {
            PmcMode::Poly => None,
            PmcMode::Fpt => Some(fpt_repetitions(m, self.mu)),
        };
        let required = match fpt_term {
            Some(f) => (poly_term as f64).max(f.ceil()),
            None => poly_term as f64,
        };
        let cap = self.r_cap.unwrap_or(poly_term.saturating_mul(10)).max(1);
        let iterations = if required >= cap as f64 { cap } else { required as u64 };
        RepetitionPlan {
            poly_term,
            fpt_term,
            required,
            cap,
            iterations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepetitionPlan {
    /// `ceil((2 - 2/e) / eps^2 * ln n)`, at least 1.
    pub poly_term: u64,
    /// `ln m / -ln(1 - (1 - f(mu))^m)` in FPT mode, before rounding up.
    pub fpt_term: Option<f64>,
    /// `R`, possibly astronomically large or infinite.
    pub required: f64,
    pub cap: u64,
    /// Iterations actually run: `min(R, cap)`.
    pub iterations: u64,
}

impl RepetitionPlan {
    pub fn capped(&self) -> bool {
        self.required > self.cap as f64
    }
}

/// `4 ln m / ln ln m`, evaluated at `max(m, 16)` and floored at 1.
pub fn poly_delta(m: usize) -> f64 {
    let m = m.max(16) as f64;
    (4.0 * m.ln() / m.ln().ln()).max(1.0)
}

/// `ceil((2 - 2/e) / eps^2 * ln n)`, at least one iteration.
pub fn poly_repetitions(n: usize, epsilon: f64) -> u64 {
    let r = (2.0 - 2.0 / E) / (epsilon * epsilon) * (n.max(1) as f64).ln();
    (r.ceil() as u64).max(1)
}

/// `f(x) = e^x / (1 + x)^(1 + x)`, the upper Chernoff tail at unit mean.
pub fn fpt_tail(x: f64) -> f64 {
    (x - (1.0 + x) * x.ln_1p()).exp()
}

/// `ln m / -ln(1 - (1 - f(mu))^m)`; infinite when the keep probability
/// underflows.
pub fn fpt_repetitions(m: usize, mu: f64) -> f64 {
    let keep_all = (1.0 - fpt_tail(mu)).powi(m as i32);
    let per_try = -(-keep_all).ln_1p();
    (m as f64).ln() / per_try
}

/// The relaxation together with its variable layout.
#[derive(Clone, Debug)]
pub struct PmcLp {
    pub lp: LinearProgram,
    /// `x_var[s][j]`: column of `x_{S,j}`.
    pub x_var: Vec<Vec<usize>>,
    /// `(element, column)` for every `y_u`.
    pub y_var: Vec<(usize, usize)>,
    /// Per-machine divisor applied to costs and budgets.
    pub normalization: Vec<f64>,
}

/// Relaxation over the whole universe.
pub fn build_pmc_lp(inst: &ProblemInstance, budgets: &[Rational]) -> Result<PmcLp> {
    build_pmc_lp_on(inst, &inst.universe(), budgets)
}

/// Relaxation covering only `remaining`.
///
/// Machine `j`'s costs and budget are divided by `max(1, sum_S c(S, j))`
/// over finite costs; budgets above that sum cannot bind and are clamped to it
/// first, so every normalized budget is at most 1.
pub fn build_pmc_lp_on(inst: &ProblemInstance, remaining: &ElementSet, budgets: &[Rational]) -> Result<PmcLp> {
    let (k, m) = (inst.k(), inst.m());
    check_budgets(inst, budgets)?;
    let elements: Vec<usize> = remaining.ones().filter(|&u| u < inst.n()).collect();
    let nx = k * m;
    let nvars = nx + elements.len();

    let mut objective = vec![0.0; nvars];
    for o in objective.iter_mut().skip(nx) {
        *o = 1.0;
    }
    let mut lp = LinearProgram::new(objective);
    lp.bounds = vec![(0.0, 1.0); nvars];
    let x_var: Vec<Vec<usize>> = (0..k).map(|s| (0..m).map(|j| s * m + j).collect()).collect();
    let y_var: Vec<(usize, usize)> = elements.iter().enumerate().map(|(i, &u)| (u, nx + i)).collect();

    let mut names = Vec::with_capacity(nvars);
    for s in 0..k {
        for j in 0..m {
            names.push(format!("x_{s}_{j}"));
            if inst.cost(s, j).is_infinite() {
                lp.bounds[x_var[s][j]] = (0.0, 0.0);
            }
        }
    }
    for &(u, _) in &y_var {
        names.push(format!("y_{u}"));
    }
    lp.names = Some(names);

    for &(u, col) in &y_var {
        let mut row = vec![0.0; nvars];
        for s in 0..k {
            if inst.set_bits(s).contains(u) {
                for j in 0..m {
                    row[x_var[s][j]] = 1.0;
                }
            }
        }
        row[col] = -1.0;
        lp.add_constraint(row, Relation::Ge, 0.0);
    }

    let mut normalization = Vec::with_capacity(m);
    for j in 0..m {
        let total: f64 = (0..k).filter_map(|s| inst.cost(s, j).finite()).map(|c| to_f64(&c)).sum();
        let norm = total.max(1.0);
        let mut row = vec![0.0; nvars];
        for s in 0..k {
            if let Cost::Finite(c) = inst.cost(s, j) {
                row[x_var[s][j]] = to_f64(&c) / norm;
            }
        }
        let budget = to_f64(&budgets[j]).min(total) / norm;
        debug_assert!(budget <= 1.0 + 1e-12);
        lp.add_constraint(row, Relation::Le, budget);
        normalization.push(norm);
    }
    Ok(PmcLp {
        lp,
        x_var,
        y_var,
        normalization,
    })
}

fn check_budgets(inst: &ProblemInstance, budgets: &[Rational]) -> Result<()> {
    if budgets.len() != inst.m() {
        return Err(Error::Validation(format!(
            "budgets: expected {} entries, found {}",
            inst.m(),
            budgets.len()
        )));
    }
    if let Some(j) = budgets.iter().position(|b| *b < Rational::zero()) {
        return Err(Error::Validation(format!("budgets[{j}]: negative budget")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PmcResult {
    pub assignment: Assignment,
    pub per_machine_cost: Vec<Rational>,
    pub covered: usize,
    pub lp_objective: f64,
    pub iterations_kept: u64,
    pub iterations_run: u64,
    pub delta: f64,
    pub plan: RepetitionPlan,
}

/// True when `cost <= (1 + delta) * budget`, the keep rule for an iteration.
pub fn within_budget(cost: &Rational, budget: &Rational, delta: f64) -> bool {
    to_f64(cost) <= (1.0 + delta) * to_f64(budget)
}

const INTEGRAL_TOL: f64 = 1e-9;

/// Draws one rounding of `x` (`x[s][j]`) with generator stream `r`.
///
/// Only fractional entries consume randomness; entries at 0 or 1 are
/// deterministic.
pub fn sample_rounding(x: &[Vec<f64>], seed: u64, r: u64) -> Vec<Vec<bool>> {
    let mut rng = stream_rng(seed, r);
    x.iter()
        .map(|row| {
            row.iter()
                .map(|&p| {
                    if p <= INTEGRAL_TOL {
                        false
                    } else if p >= 1.0 - INTEGRAL_TOL {
                        true
                    } else {
                        rng.random::<f64>() < p
                    }
                })
                .collect()
        })
        .collect()
}

/// Rounds an optimal relaxation of [`build_pmc_lp_on`] into an assignment.
pub fn round_pmc(
    inst: &ProblemInstance,
    remaining: &ElementSet,
    budgets: &[Rational],
    pmc_lp: &PmcLp,
    solution: &LpSolution,
    params: &PmcParams,
) -> Result<PmcResult> {
    params.check()?;
    check_budgets(inst, budgets)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::NumericalFailure(format!("relaxation is {:?}", solution.status)));
    }
    let (k, m) = (inst.k(), inst.m());
    let delta = params.delta(m);
    let plan = params.repetitions(inst.n(), m);
    let empty = |plan| PmcResult {
        assignment: Assignment::empty(m),
        per_machine_cost: vec![Rational::zero(); m],
        covered: 0,
        lp_objective: solution.objective_value,
        iterations_kept: 0,
        iterations_run: 0,
        delta,
        plan,
    };
    if solution.objective_value <= INTEGRAL_TOL {
        return Ok(empty(plan));
    }

    let x: Vec<Vec<f64>> = (0..k)
        .map(|s| (0..m).map(|j| solution.values[pmc_lp.x_var[s][j]].clamp(0.0, 1.0)).collect())
        .collect();
    let integral = x.iter().flatten().all(|&p| p <= INTEGRAL_TOL || p >= 1.0 - INTEGRAL_TOL);
    // No rounding covers more than the relaxation value or the support.
    let mut support = ElementSet::with_capacity(inst.n());
    for s in (0..k).filter(|&s| x[s].iter().any(|&p| p > INTEGRAL_TOL)) {
        support.union_with(inst.set_bits(s));
    }
    support.intersect_with(remaining);
    let ceiling = ((solution.objective_value + 1e-6).floor() as usize).min(support.count_ones(..));

    let cost_f: Vec<Vec<f64>> = (0..k).map(|s| (0..m).map(|j| inst.cost(s, j).to_f64()).collect()).collect();
    let bound_f: Vec<f64> = budgets.iter().map(|b| (1.0 + delta) * to_f64(b)).collect();
    let exact_load = |picks: &[Vec<bool>], j: usize| -> Result<Rational> {
        let mut total = Rational::zero();
        for s in (0..k).filter(|&s| picks[s][j]) {
            total += inst.cost(s, j).finite().ok_or(Error::InfiniteCost { set: s, machine: j })?;
        }
        Ok(total)
    };

    let mut best: Option<(usize, Assignment)> = None;
    let mut kept = 0;
    let mut run = 0;
    for r in 0..plan.iterations {
        run += 1;
        let picks = sample_rounding(&x, params.seed, r);
        let mut ok = true;
        for j in 0..m {
            let realized: f64 = (0..k).filter(|&s| picks[s][j]).map(|s| cost_f[s][j]).sum();
            if realized > bound_f[j] * (1.0 + 1e-9) {
                ok = false;
            } else if realized >= bound_f[j] * (1.0 - 1e-9) && !within_budget(&exact_load(&picks, j)?, &budgets[j], delta) {
                ok = false;
            }
            if !ok {
                break;
            }
        }
        if ok {
            kept += 1;
            // A set drawn on several machines stays on the first.
            let mut per_machine: Vec<Vec<usize>> = vec![Vec::new(); m];
            let mut placed = vec![false; k];
            let mut cov = ElementSet::with_capacity(inst.n());
            for (j, seq) in per_machine.iter_mut().enumerate() {
                for s in 0..k {
                    if picks[s][j] && !placed[s] {
                        placed[s] = true;
                        seq.push(s);
                        cov.union_with(inst.set_bits(s));
                    }
                }
            }
            cov.intersect_with(remaining);
            let covered = cov.count_ones(..);
            if best.as_ref().is_none_or(|b| covered > b.0) {
                best = Some((covered, Assignment { per_machine }));
            }
        }
        if integral || best.as_ref().is_some_and(|b| b.0 >= ceiling) {
            break;
        }
    }
    let best = match best {
        Some((covered, assignment)) => {
            let loads = assignment.loads(inst)?;
            Some((covered, assignment, loads))
        }
        None => None,
    };
    match best {
        None => Err(Error::NoIterationKept { iterations: run }),
        Some((covered, assignment, per_machine_cost)) => Ok(PmcResult {
            assignment,
            per_machine_cost,
            covered,
            lp_objective: solution.objective_value,
            iterations_kept: kept,
            iterations_run: run,
            delta,
            plan,
        }),
    }
}

/// Relaxation, LP solve and rounding over the whole universe.
pub fn pmc_solve(inst: &ProblemInstance, budgets: &[Rational], params: &PmcParams) -> Result<PmcResult> {
    pmc_solve_on(inst, &inst.universe(), budgets, params)
}

pub fn pmc_solve_on(
    inst: &ProblemInstance,
    remaining: &ElementSet,
    budgets: &[Rational],
    params: &PmcParams,
) -> Result<PmcResult> {
    params.check()?;
    let pmc_lp = build_pmc_lp_on(inst, remaining, budgets)?;
    let solution = solve_lp(&pmc_lp.lp)?;
    round_pmc(inst, remaining, budgets, &pmc_lp, &solution, params)
}
