//! Brute-force reference solvers, independent of the library's search code.
//! Exponential in `k`; meant for `k <= 5`.

#![allow(dead_code)]

use num_traits::Zero;
use pmssc::{Cost, ElementSet, ProblemInstance, Rational};

/// Every map `set -> None | Some(machine)`.
pub fn labelings(k: usize, m: usize) -> impl Iterator<Item = Vec<Option<usize>>> {
    let total = (m + 1).pow(k as u32);
    (0..total).map(move |mut code| {
        (0..k)
            .map(|_| {
                let d = code % (m + 1);
                code /= m + 1;
                (d > 0).then(|| d - 1)
            })
            .collect()
    })
}

fn cost(inst: &ProblemInstance, s: usize, j: usize) -> Option<Rational> {
    match inst.cost(s, j) {
        Cost::Finite(c) => Some(c),
        Cost::Infinite => None,
    }
}

/// Per-machine loads of a labeling, `None` if some set has infinite cost.
pub fn loads(inst: &ProblemInstance, lab: &[Option<usize>]) -> Option<Vec<Rational>> {
    let mut loads = vec![Rational::zero(); inst.m()];
    for (s, l) in lab.iter().enumerate() {
        if let Some(j) = *l {
            loads[j] += cost(inst, s, j)?;
        }
    }
    Some(loads)
}

pub fn covered_by(inst: &ProblemInstance, lab: &[Option<usize>], restrict: &ElementSet) -> usize {
    (0..inst.n())
        .filter(|&u| restrict.contains(u) && lab.iter().enumerate().any(|(s, l)| l.is_some() && inst.set(s).contains(&u)))
        .count()
}

/// Maximum density over all nonempty labelings.
pub fn brute_pds(inst: &ProblemInstance, restrict: &ElementSet) -> Option<Rational> {
    labelings(inst.k(), inst.m())
        .filter(|lab| lab.iter().any(Option::is_some))
        .filter_map(|lab| {
            let span = loads(inst, &lab)?.into_iter().max()?;
            let cov = covered_by(inst, &lab, restrict);
            (cov > 0).then(|| Rational::from_integer(cov as i128) / span)
        })
        .max()
}

/// Maximum coverage with every machine load within its budget.
pub fn brute_pmc(inst: &ProblemInstance, budgets: &[Rational]) -> usize {
    let all = pmssc::full_set(inst.n());
    labelings(inst.k(), inst.m())
        .filter(|lab| loads(inst, lab).is_some_and(|l| l.iter().zip(budgets).all(|(a, b)| a <= b)))
        .map(|lab| covered_by(inst, &lab, &all))
        .max()
        .unwrap_or(0)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Cover time sum of a schedule without idle time, `None` if some element
/// stays uncovered or a cost is infinite.
pub fn schedule_cost(inst: &ProblemInstance, per_machine: &[Vec<usize>]) -> Option<Rational> {
    let mut finish: Vec<Option<Rational>> = vec![None; inst.k()];
    for (j, seq) in per_machine.iter().enumerate() {
        let mut t = Rational::zero();
        for &s in seq {
            t += cost(inst, s, j)?;
            finish[s] = Some(t);
        }
    }
    let mut total = Rational::zero();
    for u in 0..inst.n() {
        total += (0..inst.k())
            .filter(|&s| inst.set(s).contains(&u))
            .filter_map(|s| finish[s])
            .min()?;
    }
    Some(total)
}

/// Minimum schedule cost over every labeling and every machine order.
pub fn brute_pmssc(inst: &ProblemInstance) -> Option<Rational> {
    let m = inst.m();
    let mut best: Option<Rational> = None;
    for lab in labelings(inst.k(), m) {
        let groups: Vec<Vec<usize>> = (0..m)
            .map(|j| (0..inst.k()).filter(|&s| lab[s] == Some(j)).collect())
            .collect();
        let orders: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g)).collect();
        let mut idx = vec![0usize; m];
        loop {
            let per: Vec<Vec<usize>> = (0..m).map(|j| orders[j][idx[j]].clone()).collect();
            if let Some(c) = schedule_cost(inst, &per) {
                if best.is_none_or(|b| c < b) {
                    best = Some(c);
                }
            }
            let mut j = 0;
            while j < m {
                idx[j] += 1;
                if idx[j] < orders[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
    }
    best
}
