//! Worked examples for each public operation. Expected values marked as
//! brute force are recomputed here by the reference solvers in `common`.

mod common;

use std::f64::consts::E;

use pmssc::bounds::{chernoff_lower, chernoff_upper, validate_bound_monte_carlo, Side};
use pmssc::fixtures;
use pmssc::instance::ValidationIssue;
use pmssc::io::{generate_instance, parse_instance, GeneratorSpec, ModelKind};
use pmssc::lp::{lp_upper_bounds_ilp, solve_lp, LinearProgram, LpStatus, Relation};
use pmssc::maxcov::{budgeted_max_coverage, MaxCovMode};
use pmssc::oracle::{exact_pds, exact_pds_precedence, exact_pmc, exact_pmssc, OracleLimits};
use pmssc::pds::{pds_identical, pds_related, pds_unit, pds_unrelated, reduce_related, PdsOracle, PdsParams};
use pmssc::pmc::{build_pmc_lp, pmc_solve, poly_delta, round_pmc, PmcParams};
use pmssc::precedence::{layered_assign, pcds, pmssc_precedence, PrecedenceDag};
use pmssc::rational::to_f64;
use pmssc::scheduler::{pmssc_greedy, upper_bound_from_trace};
use pmssc::{
    coverage, density, element_set, evaluate_schedule_cost, full_set, validate_instance, Assignment, Cost, CostModel,
    Error, ProblemInstance, Rational, Schedule,
};

fn r(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn asg(per_machine: Vec<Vec<usize>>) -> Assignment {
    Assignment::new(per_machine).unwrap()
}

const LIMITS: OracleLimits = OracleLimits::ENUMERATION;

fn t1_unit(m: usize) -> ProblemInstance {
    ProblemInstance::new(3, vec![vec![0, 1], vec![2], vec![0, 1, 2]], m, CostModel::Unit, None).unwrap()
}

fn t1_related(speeds: &[i128]) -> ProblemInstance {
    ProblemInstance::new(
        3,
        vec![vec![0, 1], vec![2], vec![0, 1, 2]],
        speeds.len(),
        CostModel::Related {
            base_costs: vec![1, 1, 2],
            speeds: speeds.iter().map(|&s| r(s)).collect(),
        },
        None,
    )
    .unwrap()
}

fn single_full_set(n: usize, c: u64, m: usize) -> ProblemInstance {
    ProblemInstance::new(n, vec![(0..n).collect()], m, CostModel::Identical { base_costs: vec![c] }, None).unwrap()
}

/// `S1` covers nothing, `S2` covers everything, `S1 -> S2`.
fn chain(n: usize) -> ProblemInstance {
    ProblemInstance::new(n, vec![vec![], (0..n).collect()], 1, CostModel::Unit, Some(vec![(0, 1)])).unwrap()
}

/// Diamond `S1 -> S2, S3 -> S4` where only `S4` covers anything.
fn diamond(n: usize) -> ProblemInstance {
    ProblemInstance::new(
        n,
        vec![vec![], vec![], vec![], (0..n).collect()],
        2,
        CostModel::Unit,
        Some(vec![(0, 1), (0, 2), (1, 3), (2, 3)]),
    )
    .unwrap()
}

// evaluate_schedule_cost

#[test]
fn cost_fig1_is_83() {
    let c = evaluate_schedule_cost(&fixtures::fig1(), &fixtures::fig1_schedule()).unwrap();
    assert_eq!(c.total, r(83));
    assert_eq!(Some(c.total), common::schedule_cost(&fixtures::fig1(), &fixtures::fig1_schedule().per_machine));
}

#[test]
fn cost_single_set_is_c_times_n() {
    let inst = single_full_set(7, 5, 1);
    assert_eq!(evaluate_schedule_cost(&inst, &Schedule::new(vec![vec![0]])).unwrap().total, r(35));
}

#[test]
fn cost_t1_one_machine() {
    let inst = fixtures::t1(1);
    let c = evaluate_schedule_cost(&inst, &Schedule::new(vec![vec![0, 1]])).unwrap();
    assert_eq!(c.total, r(4));
    assert_eq!(c.cover_times, vec![r(1), r(1), r(2)]);
    assert_eq!(common::brute_pmssc(&inst), Some(r(4)));
}

#[test]
fn cost_rejects_uncovering_schedule() {
    let e = evaluate_schedule_cost(&fixtures::t1(1), &Schedule::new(vec![vec![0]])).unwrap_err();
    assert_eq!(e, Error::UncoveredElement(2));
}

// coverage

#[test]
fn coverage_examples() {
    let fig1 = fixtures::fig1();
    let got = coverage(&fig1, &[1, 7], &fig1.universe()).unwrap();
    // u3, u5, u7, u16, u19 in 0-based form.
    assert_eq!(got.ones().collect::<Vec<_>>(), vec![2, 4, 6, 15, 18]);
    assert_eq!(coverage(&fig1, &[], &fig1.universe()).unwrap().count_ones(..), 0);
    let t1 = fixtures::t1(1);
    let got = coverage(&t1, &[0, 1], &element_set(3, [2])).unwrap();
    assert_eq!(got.ones().collect::<Vec<_>>(), vec![2]);
}

// density

#[test]
fn density_examples() {
    let t1 = fixtures::t1(1);
    let u = t1.universe();
    assert_eq!(density(&t1, &asg(vec![vec![0]]), &u).unwrap().value(), r(2));
    assert_eq!(common::brute_pds(&t1, &u), Some(r(2)));
    let t2 = fixtures::t1(2);
    assert_eq!(density(&t2, &asg(vec![vec![0], vec![1]]), &u).unwrap().value(), r(3));
    assert_eq!(common::brute_pds(&t2, &u), Some(r(3)));
    // Everything on one machine: covered over total cost.
    let fig1 = fixtures::fig1();
    let d = density(&fig1, &asg(vec![(0..10).collect(), vec![], vec![]]), &fig1.universe()).unwrap();
    assert_eq!(d.value(), Rational::new(20, 27));
    assert_eq!(density(&t1, &Assignment::empty(1), &u), Err(Error::EmptyAssignment));
}

// validate_instance

#[test]
fn validation_examples() {
    let report = validate_instance(&fixtures::fig1());
    assert!(report.coverable && report.is_valid());
    let bad = ProblemInstance::new(2, vec![vec![0]], 1, CostModel::Unit, None).unwrap();
    let report = validate_instance(&bad);
    assert!(!report.coverable);
    assert_eq!(report.uncovered, vec![1]);
    let cyc = ProblemInstance::new(1, vec![vec![0], vec![0]], 1, CostModel::Unit, Some(vec![(0, 1), (1, 0)])).unwrap();
    assert!(validate_instance(&cyc).issues.iter().any(|i| matches!(i, ValidationIssue::CyclicDag(_))));
}

// budgeted_max_coverage

#[test]
fn maxcov_examples() {
    let t1 = fixtures::t1(1);
    let bits: Vec<_> = (0..3).map(|s| t1.set_bits(s).clone()).collect();
    let costs = vec![r(1), r(1), r(2)];
    let u = full_set(3);
    let res = budgeted_max_coverage(&u, &bits, &costs, r(2), MaxCovMode::Ratio);
    assert_eq!(res.covered, 3);
    assert_eq!(common::brute_pmc(&t1, &[r(2)]), 3);

    let zero = budgeted_max_coverage(&u, &bits, &costs, r(0), MaxCovMode::PartialEnum3);
    assert!(zero.chosen.is_empty() && zero.covered == 0);

    let sets = vec![element_set(4, [0]), element_set(4, [1]), element_set(4, [0, 1, 2, 3])];
    let costs = vec![r(1), r(1), r(3)];
    for mode in [MaxCovMode::Ratio, MaxCovMode::PartialEnum3] {
        let res = budgeted_max_coverage(&full_set(4), &sets, &costs, r(3), mode);
        assert_eq!(res.covered, 4, "{mode:?}");
    }
}

// solve_lp and lp_upper_bounds_ilp

#[test]
fn lp_examples() {
    let mut lp = LinearProgram::new(vec![1.0]);
    lp.bounds = vec![(0.0, 1.0)];
    lp.add_constraint(vec![1.0], Relation::Le, 1.0);
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.values[0] - 1.0).abs() < 1e-9 && (sol.objective_value - 1.0).abs() < 1e-9);

    let mut lp = LinearProgram::new(vec![1.0]);
    lp.bounds = vec![(0.0, 1.0)];
    lp.add_constraint(vec![1.0], Relation::Ge, 2.0);
    assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

    let t1 = fixtures::t1(1);
    let pmc = build_pmc_lp(&t1, &[r(2)]).unwrap();
    let sol = solve_lp(&pmc.lp).unwrap();
    assert!((sol.objective_value - 3.0).abs() < 1e-9);
    assert!(lp_upper_bounds_ilp(&sol, 3));
    let fake = pmssc::lp::LpSolution {
        objective_value: 2.5,
        ..sol
    };
    assert!(!lp_upper_bounds_ilp(&fake, 3));
}

#[test]
fn lp_dominates_exact_pmc_on_random_instances() {
    for seed in 0..50 {
        let inst = generate_instance(&GeneratorSpec::new(8, 6, 2, ModelKind::Identical, 0.3, seed)).unwrap();
        let budgets = vec![r(2), r(3)];
        let sol = solve_lp(&build_pmc_lp(&inst, &budgets).unwrap().lp).unwrap();
        let (_, opt) = exact_pmc(&inst, &budgets, &LIMITS).unwrap();
        assert!(lp_upper_bounds_ilp(&sol, opt as i64), "seed {seed}");
    }
}

// build_pmc_lp, round_pmc, pmc_solve

#[test]
fn pmc_lp_dimensions() {
    let lp = build_pmc_lp(&fixtures::t1(1), &[r(2)]).unwrap();
    assert_eq!((lp.x_var.len() * lp.x_var[0].len(), lp.y_var.len(), lp.lp.constraints.len()), (3, 3, 4));
    let one = ProblemInstance::new(1, vec![vec![0]], 2, CostModel::Unit, None).unwrap();
    let lp = build_pmc_lp(&one, &[r(1), r(1)]).unwrap();
    assert_eq!((lp.x_var[0].len(), lp.y_var.len(), lp.lp.constraints.len()), (2, 1, 3));
    let inf = ProblemInstance::new(
        1,
        vec![vec![0]],
        2,
        CostModel::Unrelated {
            matrix: vec![vec![Cost::from(1), Cost::Infinite]],
        },
        None,
    )
    .unwrap();
    let lp = build_pmc_lp(&inf, &[r(1), r(1)]).unwrap();
    assert_eq!(lp.lp.bounds[lp.x_var[0][1]], (0.0, 0.0));
}

#[test]
fn rounding_integral_solution_is_exact() {
    let t1 = fixtures::t1(2);
    let budgets = vec![r(1), r(1)];
    let pmc = build_pmc_lp(&t1, &budgets).unwrap();
    let sol = solve_lp(&pmc.lp).unwrap();
    let res = round_pmc(&t1, &t1.universe(), &budgets, &pmc, &sol, &PmcParams::poly(0.2, 0)).unwrap();
    assert_eq!(res.iterations_run, 1);
    assert_eq!(res.covered as f64, sol.objective_value.round());
}

#[test]
fn pmc_t1_covers_everything_in_almost_all_seeds() {
    let t1 = fixtures::t1(1);
    let full = (0..100).filter(|&seed| pmc_solve(&t1, &[r(2)], &PmcParams::poly(0.2, seed)).unwrap().covered == 3).count();
    assert!(full >= 99, "{full}");
    assert_eq!(exact_pmc(&t1, &[r(2)], &LIMITS).unwrap().1, 3);
}

#[test]
fn fpt_repetitions_for_three_machines() {
    let plan = PmcParams::fpt(0.2, 1.0, 0).repetitions(8, 3);
    assert!((pmssc::pmc::fpt_tail(1.0) - E / 4.0).abs() < 1e-12);
    assert_eq!(plan.fpt_term.unwrap().ceil(), 33.0);
}

#[test]
fn pmc_solve_examples() {
    let t1 = fixtures::t1(2);
    let zero = pmc_solve(&t1, &[r(0), r(0)], &PmcParams::poly(0.2, 0)).unwrap();
    assert!(zero.assignment.is_empty() && zero.covered == 0);
    let res = pmc_solve(&t1, &[r(1), r(1)], &PmcParams::poly(0.2, 0)).unwrap();
    assert_eq!(res.covered, 3);
    assert_eq!(common::brute_pmc(&t1, &[r(1), r(1)]), 3);
    assert!((poly_delta(100) - 4.0 * 100f64.ln() / 100f64.ln().ln()).abs() < 1e-12);
    assert!((poly_delta(100) - 12.06).abs() < 0.01);
}

// pds_identical, pds_unit

#[test]
fn pds_identical_examples() {
    let t2 = fixtures::t1(2);
    let out = pds_identical(&t2, &t2.universe(), &PdsParams::new(0.1, 0)).unwrap();
    assert_eq!(out.density.value(), r(3));
    assert_eq!(out.guess, Some(r(1)));
    assert_eq!(Some(out.density.value()), common::brute_pds(&t2, &t2.universe()));

    for m in 1..=3 {
        let inst = single_full_set(6, 4, m);
        let out = pds_identical(&inst, &inst.universe(), &PdsParams::new(0.1, 0)).unwrap();
        assert_eq!(out.density.value(), Rational::new(6, 4));
    }

    let fig1 = fixtures::fig1();
    let got = pds_identical(&fig1, &fig1.universe(), &PdsParams::new(0.1, 0)).unwrap().density;
    let (_, best) = exact_pds(&fig1, &fig1.universe(), &LIMITS).unwrap();
    assert!(to_f64(&(got.value() / best.value())) >= pmssc::pds::identical_ratio(0.1));
}

#[test]
fn pds_unit_examples() {
    let disjoint = ProblemInstance::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]], 3, CostModel::Unit, None).unwrap();
    let out = pds_unit(&disjoint, &disjoint.universe(), &PdsParams::new(0.1, 0)).unwrap();
    assert_eq!(out.density.value(), r(6));
    assert!(out.assignment.per_machine.iter().all(|s| s.len() == 1));

    // With unit costs C covers all three elements in one slot.
    let t1 = t1_unit(1);
    let out = pds_unit(&t1, &t1.universe(), &PdsParams::new(0.1, 0)).unwrap();
    assert_eq!(out.density.value(), r(3));
    assert_eq!(common::brute_pds(&t1, &t1.universe()), Some(r(3)));

    let empty = element_set(3, []);
    assert_eq!(pds_unit(&t1, &empty, &PdsParams::new(0.1, 0)).unwrap_err(), Error::NoCoverage);
}

// reduce_related, pds_related

#[test]
fn reduction_examples() {
    let (red, aux) = reduce_related(&t1_related(&[1, 1]), 0.5).unwrap();
    assert_eq!(red.groups[0], vec![0, 1]);
    assert_eq!(red.nonempty_groups(), 1);
    assert_eq!(red.multipliers[0], r(1));
    assert_eq!(aux.m(), 1);

    let slow = ProblemInstance::new(
        3,
        vec![vec![0, 1], vec![2], vec![0, 1, 2]],
        2,
        CostModel::Related {
            base_costs: vec![1, 1, 2],
            speeds: vec![r(1), Rational::new(1, 1_000_000)],
        },
        None,
    )
    .unwrap();
    let (red, _) = reduce_related(&slow, 0.5).unwrap();
    assert_eq!(red.discarded_machines, vec![1]);

    // Speeds (4, 2, 1) keep the two fast machines; see the acceptance suite.
    let (red, _) = reduce_related(&t1_related(&[4, 2, 1]), 1.0).unwrap();
    assert_eq!(red.kept_machines, vec![0, 1]);
    assert_eq!(red.multipliers, vec![r(1), r(2)]);
}

#[test]
fn pds_related_examples() {
    let equal = t1_related(&[1, 1]);
    let out = pds_related(&equal, &equal.universe(), &PdsParams::new(0.2, 0)).unwrap();
    assert_eq!(out.density.value(), r(3));
    let ident = pds_identical(&fixtures::t1(2), &equal.universe(), &PdsParams::new(0.2, 0)).unwrap();
    assert_eq!(out.density, ident.density);

    let skewed = t1_related(&[2, 1]);
    let got = pds_related(&skewed, &skewed.universe(), &PdsParams::new(0.2, 0)).unwrap().density;
    let best = common::brute_pds(&skewed, &skewed.universe()).unwrap();
    assert!(to_f64(&(got.value() / best)) >= 0.3);
}

// pds_unrelated

#[test]
fn pds_unrelated_examples() {
    let t1 = ProblemInstance::new(
        3,
        vec![vec![0, 1], vec![2], vec![0, 1, 2]],
        1,
        CostModel::Unrelated {
            matrix: vec![vec![Cost::from(1)], vec![Cost::from(1)], vec![Cost::from(2)]],
        },
        None,
    )
    .unwrap();
    let out = pds_unrelated(&t1, &t1.universe(), &PdsParams::new(0.2, 0)).unwrap();
    assert_eq!(out.density.value(), r(2));

    let forced = ProblemInstance::new(
        2,
        vec![vec![0], vec![1]],
        2,
        CostModel::Unrelated {
            matrix: vec![vec![Cost::from(1), Cost::Infinite], vec![Cost::Infinite, Cost::from(1)]],
        },
        None,
    )
    .unwrap();
    let out = pds_unrelated(&forced, &forced.universe(), &PdsParams::new(0.2, 0)).unwrap();
    assert_eq!(out.density.value(), r(2));
    assert_eq!(out.assignment.per_machine, vec![vec![0], vec![1]]);

    // Machine 0 may only run set 2.
    let restricted = ProblemInstance::new(
        4,
        vec![vec![0], vec![1], vec![2, 3]],
        2,
        CostModel::Unrelated {
            matrix: vec![
                vec![Cost::Infinite, Cost::from(1)],
                vec![Cost::Infinite, Cost::from(1)],
                vec![Cost::from(1), Cost::from(1)],
            ],
        },
        None,
    )
    .unwrap();
    for seed in 0..10 {
        let out = pds_unrelated(&restricted, &restricted.universe(), &PdsParams::new(0.2, seed)).unwrap();
        assert!(out.assignment.per_machine[0].iter().all(|&s| s == 2));
    }
}

// pmssc_greedy, upper_bound_from_trace

#[test]
fn greedy_examples() {
    let t1 = fixtures::t1(1);
    let (sched, trace) = pmssc_greedy(&t1, PdsOracle::Exact, &PdsParams::new(0.1, 0), &LIMITS).unwrap();
    assert_eq!(sched.per_machine, vec![vec![0, 1]]);
    assert_eq!(evaluate_schedule_cost(&t1, &sched).unwrap().total, r(4));
    assert_eq!(upper_bound_from_trace(&trace), r(4));

    let single = single_full_set(5, 3, 2);
    let (sched, trace) = pmssc_greedy(&single, PdsOracle::Identical, &PdsParams::new(0.1, 0), &LIMITS).unwrap();
    assert_eq!(trace.iterations.len(), 1);
    assert_eq!(evaluate_schedule_cost(&single, &sched).unwrap().total, r(15));
    assert_eq!(upper_bound_from_trace(&trace), r(15));
}

#[test]
fn greedy_fig1_within_bound() {
    let fig1 = fixtures::fig1();
    let (sched, trace) = pmssc_greedy(&fig1, PdsOracle::Identical, &PdsParams::new(0.1, 0), &LIMITS).unwrap();
    let cost = evaluate_schedule_cost(&fig1, &sched).unwrap().total;
    let limits = OracleLimits {
        max_k: 10,
        max_m: 3,
        max_n: 20,
        node_budget: 200_000_000,
    };
    let (_, opt) = exact_pmssc(&fig1, &limits).unwrap();
    assert!(opt <= r(83));
    assert!(to_f64(&(cost / opt)) <= 13.06);
    assert!(upper_bound_from_trace(&trace) >= cost);
}

// closure, layered_assign

#[test]
fn closure_examples() {
    let iso = PrecedenceDag::new(3, &[]).unwrap();
    assert_eq!(iso.closure(1).unwrap(), vec![1]);
    let chain = PrecedenceDag::new(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(chain.closure(2).unwrap(), vec![0, 1, 2]);
    let diamond = PrecedenceDag::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(diamond.closure(3).unwrap(), vec![0, 1, 2, 3]);
}

#[test]
fn layered_examples() {
    let free = PrecedenceDag::new(4, &[]).unwrap();
    assert_eq!(layered_assign(&[0, 1, 2, 3], &free, 2).unwrap().makespan, 2);
    let chain = PrecedenceDag::new(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(layered_assign(&[0, 1, 2], &chain, 5).unwrap().makespan, 3);
    let diamond = PrecedenceDag::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let l = layered_assign(&[0, 1, 2, 3], &diamond, 2).unwrap();
    assert_eq!(l.makespan, 3);
    assert_eq!(l.layer_starts, vec![0, 1, 2]);
}

// pcds, pmssc_precedence, exact_pds_precedence

#[test]
fn pcds_examples() {
    let free = ProblemInstance::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]], 3, CostModel::Unit, Some(vec![])).unwrap();
    let out = pcds(&free, &free.universe(), None).unwrap();
    assert_eq!(out.density.value(), r(6));
    assert_eq!(out.layered.makespan, 1);

    let c = chain(4);
    let out = pcds(&c, &c.universe(), None).unwrap();
    assert_eq!(out.density.value(), r(2));
    assert_eq!(out.layered.sets(), vec![0, 1]);
}

#[test]
fn precedence_schedule_examples() {
    let c = chain(4);
    let (sched, _) = pmssc_precedence(&c).unwrap();
    assert_eq!(sched.per_machine, vec![vec![0, 1]]);
    assert_eq!(evaluate_schedule_cost(&c, &sched).unwrap().total, r(8));

    let d = diamond(4);
    let (sched, _) = pmssc_precedence(&d).unwrap();
    assert_eq!(evaluate_schedule_cost(&d, &sched).unwrap().total, r(12));
}

#[test]
fn exact_precedence_examples() {
    let free = generate_instance(&GeneratorSpec {
        dag_edge_prob: Some(0.0),
        ..GeneratorSpec::new(6, 5, 2, ModelKind::Unit, 0.4, 9)
    })
    .unwrap();
    let u = free.universe();
    let prec = exact_pds_precedence(&free, &u, &LIMITS).unwrap().density;
    assert_eq!(prec.value(), exact_pds(&free, &u, &LIMITS).unwrap().1.value());

    let c = chain(4);
    assert_eq!(exact_pds_precedence(&c, &c.universe(), &LIMITS).unwrap().density.value(), r(2));
    let d = diamond(6);
    assert_eq!(exact_pds_precedence(&d, &d.universe(), &LIMITS).unwrap().density.value(), r(2));
}

// exact oracles

#[test]
fn exact_pmssc_examples() {
    let (sched, cost) = exact_pmssc(&fixtures::t1(1), &OracleLimits::PMSSC).unwrap();
    assert_eq!(cost, r(4));
    assert_eq!(sched.per_machine, vec![vec![0, 1]]);
    for m in 1..=3 {
        assert_eq!(exact_pmssc(&single_full_set(4, 3, m), &OracleLimits::PMSSC).unwrap().1, r(12));
    }
    let halves = ProblemInstance::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]], 2, CostModel::Identical { base_costs: vec![2, 2] }, None).unwrap();
    assert_eq!(exact_pmssc(&halves, &OracleLimits::PMSSC).unwrap().1, r(12));
    assert_eq!(common::brute_pmssc(&halves), Some(r(12)));
}

#[test]
fn exact_pds_examples() {
    let t1 = fixtures::t1(1);
    assert_eq!(exact_pds(&t1, &t1.universe(), &LIMITS).unwrap().1.value(), r(2));
    let t2 = fixtures::t1(2);
    assert_eq!(exact_pds(&t2, &t2.universe(), &LIMITS).unwrap().1.value(), r(3));
    assert_eq!(exact_pds(&t1, &element_set(3, []), &LIMITS).unwrap_err(), Error::NoCoverage);
}

#[test]
fn exact_pmc_examples() {
    let t1 = fixtures::t1(1);
    assert_eq!(exact_pmc(&t1, &[r(2)], &LIMITS).unwrap().1, 3);
    assert_eq!(exact_pmc(&t1, &[r(0)], &LIMITS).unwrap().1, 0);
    assert_eq!(exact_pmc(&t1, &[r(100)], &LIMITS).unwrap().1, 3);
}

#[test]
fn oracle_limits_are_enforced() {
    let big = generate_instance(&GeneratorSpec::new(8, 13, 2, ModelKind::Unit, 0.3, 0)).unwrap();
    assert!(matches!(exact_pds(&big, &big.universe(), &LIMITS), Err(Error::LimitsExceeded(_))));
}

// Chernoff bounds

#[test]
fn chernoff_examples() {
    assert!((chernoff_upper(1.0, 1.0).unwrap() - E / 4.0).abs() < 1e-12);
    assert_eq!(chernoff_upper(0.0, 1.0).unwrap(), 1.0);
    assert!((chernoff_upper(2.0, 1.0).unwrap() - (E / 4.0).powi(2)).abs() < 1e-12);
    assert!((chernoff_lower(1.0, 0.5).unwrap() - (-0.5f64).exp() / 0.5f64.sqrt()).abs() < 1e-12);
    assert!(chernoff_lower(1.0, 1e-9).unwrap() > 1.0 - 1e-12);
    // Closed form at mu = 10, delta = 0.5, checked with 50-digit arithmetic.
    assert!((chernoff_lower(10.0, 0.5).unwrap() - 0.215614).abs() < 1e-6);
}

#[test]
fn monte_carlo_examples() {
    let check = validate_bound_monte_carlo(&[1.0; 20], &[0.5; 20], 0.5, Side::Upper, 100_000, 1).unwrap();
    assert!(check.holds);
    let check = validate_bound_monte_carlo(&[1.0], &[1.0], 0.3, Side::Upper, 10_000, 1).unwrap();
    assert_eq!(check.empirical_tail, 0.0);
    assert!(check.holds);
    let check = validate_bound_monte_carlo(&[1.0, 0.25, 0.5], &[0.2, 0.9, 0.5], 0.3, Side::Lower, 100_000, 1).unwrap();
    assert!(check.holds);
}

// parse_instance, generate_instance

#[test]
fn parse_fixture_files() {
    assert_eq!(parse_instance(include_bytes!("fixtures/fig1.json")).unwrap(), fixtures::fig1());
    assert_eq!(parse_instance(include_bytes!("fixtures/t1.json")).unwrap(), fixtures::t1(2));
    assert_eq!(parse_instance(include_bytes!("fixtures/diamond.json")).unwrap(), diamond(4));
    for bytes in [&include_bytes!("fixtures/related.json")[..], include_bytes!("fixtures/unrelated.json")] {
        assert!(validate_instance(&parse_instance(bytes).unwrap()).is_valid());
    }
}

#[test]
fn parse_errors() {
    let out_of_range = br#"{"version":1,"n":2,"m":1,"cost_model":{"kind":"unit"},"sets":[[0,2],[1]]}"#;
    match parse_instance(out_of_range).unwrap_err() {
        Error::InvalidIndex { path, .. } => assert_eq!(path, "sets[0][1]"),
        e => panic!("unexpected {e:?}"),
    }
    let cycle = br#"{"version":1,"n":1,"m":1,"cost_model":{"kind":"unit"},"sets":[[0],[0]],"dag_edges":[[0,1],[1,0]]}"#;
    assert!(matches!(parse_instance(cycle), Err(Error::CyclicDag(_))));
}

#[test]
fn generator_examples() {
    let spec = GeneratorSpec::new(8, 6, 2, ModelKind::Identical, 0.3, 42);
    assert_eq!(generate_instance(&spec).unwrap(), generate_instance(&spec).unwrap());
    let dense = generate_instance(&GeneratorSpec::new(8, 6, 2, ModelKind::Unit, 1.0, 42)).unwrap();
    assert!(dense.sets().iter().all(|s| s.len() == 8));
    for seed in 0..1000 {
        let inst = generate_instance(&GeneratorSpec::new(8, 6, 2, ModelKind::Related, 0.3, seed)).unwrap();
        assert!(validate_instance(&inst).is_valid(), "seed {seed}");
    }
}
