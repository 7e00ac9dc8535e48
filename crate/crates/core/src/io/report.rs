//! Run reports shared by the command line and the bindings.

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{rational_string, ser_rationals};
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::oracle::{exact_pds, exact_pds_precedence, exact_pmc, exact_pmssc, OracleLimits};
use crate::pds::{PdsOracle, PdsParams};
use crate::pmc::{pmc_solve, PmcMode, PmcParams};
use crate::precedence::{pcds, pmssc_precedence};
use crate::rational::{to_f64, Rational};
use crate::schedule::{density, evaluate_schedule_cost, Schedule};
use crate::scheduler::{pmssc_greedy, upper_bound_from_trace};

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::Parse(format!("unknown {} \"{other}\"", stringify!($name)))),
                }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

named_enum!(
    /// Full-schedule algorithms.
    SolveAlgo {
        GreedyIdentical => "greedy-identical",
        GreedyUnit => "greedy-unit",
        GreedyRelated => "greedy-related",
        GreedyUnrelated => "greedy-unrelated",
        GreedyPrecedence => "greedy-precedence",
        Exact => "exact",
    }
);

named_enum!(
    /// Densest-subfamily solvers.
    PdsAlgo {
        Identical => "identical",
        Unit => "unit",
        Related => "related",
        Unrelated => "unrelated",
        Exact => "exact",
        Precedence => "precedence",
    }
);

named_enum!(
    /// Problems the exact solvers handle.
    OracleProblem {
        Pmssc => "pmssc",
        Pds => "pds",
        Pmc => "pmc",
        Pcds => "pcds",
    }
);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub epsilon: f64,
    pub mu: Option<f64>,
    pub seed: u64,
    pub r_cap: Option<u64>,
}

impl RunParams {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        RunParams {
            epsilon,
            mu: None,
            seed,
            r_cap: None,
        }
    }

    fn pds(&self) -> PdsParams {
        PdsParams {
            r_cap: self.r_cap,
            ..PdsParams::new(self.epsilon, self.seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub cost: String,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub algorithm: String,
    pub parameters: serde_json::Value,
    pub instance: InstanceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delays: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covered: Option<usize>,
    pub details: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    fn new(command: &str, algorithm: &str, parameters: serde_json::Value, inst: &ProblemInstance) -> Self {
        RunReport {
            command: command.into(),
            algorithm: algorithm.into(),
            parameters,
            instance: InstanceSummary {
                n: inst.n(),
                k: inst.k(),
                m: inst.m(),
                model: inst.cost_model().kind().into(),
            },
            schedule: None,
            delays: None,
            assignment: None,
            cost: None,
            cost_value: None,
            density: None,
            covered: None,
            details: json!({}),
            oracle: None,
            wall_time_ms: None,
        }
    }

    /// Records a schedule after re-evaluating its cost.
    fn set_schedule(&mut self, inst: &ProblemInstance, sched: &Schedule) -> Result<Rational> {
        let cost = evaluate_schedule_cost(inst, sched)?.total;
        self.schedule = Some(sched.per_machine.clone());
        if sched.has_delays() {
            self.delays = Some(
                (0..sched.per_machine.len())
                    .map(|j| (0..sched.per_machine[j].len()).map(|i| rational_string(&sched.delay(j, i))).collect())
                    .collect(),
            );
        }
        self.cost = Some(rational_string(&cost));
        self.cost_value = Some(to_f64(&cost));
        Ok(cost)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the wall time, identical across repeated runs.
    pub fn canonical_json(&self) -> String {
        RunReport {
            wall_time_ms: None,
            ..self.clone()
        }
        .to_json()
    }
}

fn elapsed_ms(start: Instant) -> Option<f64> {
    Some(start.elapsed().as_secs_f64() * 1e3)
}

/// Builds a full schedule, optionally comparing with the exact optimum.
pub fn solve_report(
    inst: &ProblemInstance,
    algo: SolveAlgo,
    params: &RunParams,
    compare: Option<&OracleLimits>,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("solve", algo.as_str(), json!(params), inst);
    let oracle = match algo {
        SolveAlgo::GreedyIdentical => Some(PdsOracle::Identical),
        SolveAlgo::GreedyUnit => Some(PdsOracle::Unit),
        SolveAlgo::GreedyRelated => Some(PdsOracle::Related),
        SolveAlgo::GreedyUnrelated => Some(PdsOracle::Unrelated),
        SolveAlgo::GreedyPrecedence | SolveAlgo::Exact => None,
    };
    let cost = if let Some(oracle) = oracle {
        let (sched, trace) = pmssc_greedy(inst, oracle, &params.pds(), &OracleLimits::default())?;
        let cost = report.set_schedule(inst, &sched)?;
        report.details = json!({
            "iterations": trace.iterations.len(),
            "upper_bound": rational_string(&upper_bound_from_trace(&trace)),
            "trace": trace,
        });
        cost
    } else if algo == SolveAlgo::GreedyPrecedence {
        let (sched, trace) = pmssc_precedence(inst)?;
        let cost = report.set_schedule(inst, &sched)?;
        report.details = json!({ "iterations": trace.len(), "trace": trace });
        cost
    } else {
        let limits = compare.copied().unwrap_or(OracleLimits::PMSSC);
        let (sched, cost) = exact_pmssc(inst, &limits)?;
        report.set_schedule(inst, &sched)?;
        cost
    };
    if let Some(limits) = compare {
        let (_, opt) = exact_pmssc(inst, limits)?;
        report.oracle = Some(OracleComparison {
            cost: rational_string(&opt),
            ratio: to_f64(&(cost / opt)),
        });
    }
    report.wall_time_ms = elapsed_ms(start);
    Ok(report)
}

/// One densest-subfamily call over the whole universe.
pub fn pds_report(inst: &ProblemInstance, algo: PdsAlgo, params: &RunParams, limits: &OracleLimits) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("pds", algo.as_str(), json!(params), inst);
    let universe = inst.universe();
    let oracle = match algo {
        PdsAlgo::Identical => Some(PdsOracle::Identical),
        PdsAlgo::Unit => Some(PdsOracle::Unit),
        PdsAlgo::Related => Some(PdsOracle::Related),
        PdsAlgo::Unrelated => Some(PdsOracle::Unrelated),
        PdsAlgo::Exact => Some(PdsOracle::Exact),
        PdsAlgo::Precedence => None,
    };
    if let Some(oracle) = oracle {
        let out = oracle.solve(inst, &universe, &params.pds(), limits)?;
        let d = density(inst, &out.assignment, &universe)?;
        report.assignment = Some(out.assignment.per_machine.clone());
        report.density = Some(rational_string(&d.value()));
        report.covered = Some(d.covered as usize);
        report.details = json!({
            "makespan": rational_string(&d.makespan),
            "guess": out.guess.as_ref().map(rational_string),
            "guesses_tried": out.guesses.len(),
            "guesses_failed": out.guesses.iter().filter(|g| g.error.is_some()).count(),
        });
    } else {
        let out = pcds(inst, &universe, None)?;
        report.assignment = Some(out.layered.assignment().per_machine);
        report.density = Some(rational_string(&out.density.value()));
        report.covered = Some(out.density.covered as usize);
        report.details = json!({
            "makespan": out.layered.makespan,
            "candidate": out.candidate,
            "candidates_evaluated": out.candidates_evaluated,
            "placements": out.layered.placements,
        });
    }
    report.wall_time_ms = elapsed_ms(start);
    Ok(report)
}

/// LP rounding for maximum coverage under per-machine budgets.
pub fn pmc_report(
    inst: &ProblemInstance,
    budgets: &[Rational],
    mode: PmcMode,
    params: &RunParams,
) -> Result<RunReport> {
    let start = Instant::now();
    let pmc = PmcParams {
        mode,
        epsilon: params.epsilon,
        mu: params.mu.unwrap_or(1.0),
        r_cap: params.r_cap,
        seed: params.seed,
    };
    #[derive(Serialize)]
    struct Echo<'a> {
        #[serde(flatten)]
        params: &'a PmcParams,
        #[serde(serialize_with = "ser_rationals")]
        budgets: &'a [Rational],
    }
    let mut report = RunReport::new("pmc", mode_name(mode), json!(Echo { params: &pmc, budgets }), inst);
    let res = pmc_solve(inst, budgets, &pmc)?;
    report.assignment = Some(res.assignment.per_machine.clone());
    report.covered = Some(res.covered);
    report.details = json!({
        "lp_objective": res.lp_objective,
        "per_machine_cost": res.per_machine_cost.iter().map(rational_string).collect::<Vec<_>>(),
        "delta": res.delta,
        "iterations_run": res.iterations_run,
        "iterations_kept": res.iterations_kept,
        "repetitions_required": res.plan.required,
        "repetitions_cap": res.plan.cap,
        "capped": res.plan.capped(),
    });
    report.wall_time_ms = elapsed_ms(start);
    Ok(report)
}

fn mode_name(mode: PmcMode) -> &'static str {
    match mode {
        PmcMode::Poly => "poly",
        PmcMode::Fpt => "fpt",
    }
}

/// Exact optimum of one of the small problems.
pub fn oracle_report(
    inst: &ProblemInstance,
    problem: OracleProblem,
    limits: &OracleLimits,
    budgets: Option<&[Rational]>,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("oracle", problem.as_str(), json!(limits), inst);
    let universe = inst.universe();
    match problem {
        OracleProblem::Pmssc => {
            let (sched, _) = exact_pmssc(inst, limits)?;
            report.set_schedule(inst, &sched)?;
        }
        OracleProblem::Pds => {
            let (asg, d) = exact_pds(inst, &universe, limits)?;
            report.assignment = Some(asg.per_machine);
            report.density = Some(rational_string(&d.value()));
            report.covered = Some(d.covered as usize);
        }
        OracleProblem::Pmc => {
            let budgets = budgets.ok_or_else(|| Error::Validation("budgets: required for pmc".into()))?;
            let (asg, covered) = exact_pmc(inst, budgets, limits)?;
            report.assignment = Some(asg.per_machine);
            report.covered = Some(covered);
        }
        OracleProblem::Pcds => {
            let opt = exact_pds_precedence(inst, &universe, limits)?;
            report.assignment = Some(opt.schedule.assignment().per_machine);
            report.density = Some(rational_string(&opt.density.value()));
            report.covered = Some(opt.density.covered as usize);
            report.details = json!({ "makespan": opt.schedule.makespan, "placements": opt.schedule.placements });
        }
    }
    report.wall_time_ms = elapsed_ms(start);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn names_round_trip() {
        for a in SolveAlgo::ALL {
            assert_eq!(a.as_str().parse::<SolveAlgo>().unwrap(), *a);
        }
        assert!("nope".parse::<PdsAlgo>().is_err());
    }

    #[test]
    fn solve_report_verifies_cost() {
        let inst = fixtures::t1(1);
        let r = solve_report(&inst, SolveAlgo::Exact, &RunParams::new(0.1, 0), Some(&OracleLimits::PMSSC)).unwrap();
        assert_eq!(r.cost.as_deref(), Some("4"));
        assert_eq!(r.oracle.unwrap().ratio, 1.0);
    }

    #[test]
    fn canonical_json_drops_wall_time() {
        let inst = fixtures::t1(2);
        let r = pds_report(&inst, PdsAlgo::Identical, &RunParams::new(0.1, 0), &OracleLimits::default()).unwrap();
        assert!(r.wall_time_ms.is_some());
        assert!(!r.canonical_json().contains("wall_time_ms"));
    }
}
