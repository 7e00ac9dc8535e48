//! Budgeted maximum coverage.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::instance::ElementSet;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxCovMode {
    /// Cost-effectiveness greedy, compared against the best single set.
    Ratio,
    /// Every seed family of at most three sets completed by the greedy.
    PartialEnum3,
}

impl MaxCovMode {
    /// Partial enumeration for up to 40 candidate sets, greedy beyond.
    pub fn default_for(k: usize) -> Self {
        if k <= 40 {
            MaxCovMode::PartialEnum3
        } else {
            MaxCovMode::Ratio
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCovResult {
    /// Positions into the input slice, in selection order.
    pub chosen: Vec<usize>,
    pub total_cost: Rational,
    pub covered: usize,
}

impl MaxCovResult {
    fn empty() -> Self {
        MaxCovResult {
            chosen: Vec::new(),
            total_cost: Rational::zero(),
            covered: 0,
        }
    }
}

/// Picks sets of total cost at most `budget` covering many elements of
/// `restrict`.
///
/// Costs must be positive. Ties in cost-effectiveness go to the lowest
/// position.
pub fn budgeted_max_coverage(
    restrict: &ElementSet,
    sets: &[ElementSet],
    costs: &[Rational],
    budget: Rational,
    mode: MaxCovMode,
) -> MaxCovResult {
    assert_eq!(sets.len(), costs.len());
    debug_assert!(costs.iter().all(|c| *c > Rational::zero()));
    if budget <= Rational::zero() {
        return MaxCovResult::empty();
    }
    let gains: Vec<ElementSet> = sets
        .iter()
        .map(|s| {
            let mut g = s.clone();
            g.intersect_with(restrict);
            g
        })
        .collect();

    let ratio = ratio_with_singleton(&gains, costs, budget);
    match mode {
        MaxCovMode::Ratio => ratio,
        MaxCovMode::PartialEnum3 => partial_enumeration(&gains, costs, budget, ratio),
    }
}

fn ratio_with_singleton(gains: &[ElementSet], costs: &[Rational], budget: Rational) -> MaxCovResult {
    let greedy = complete_greedy(gains, costs, budget, Vec::new());
    let best_single = (0..gains.len())
        .filter(|&i| costs[i] <= budget)
        .map(|i| (gains[i].count_ones(..), i))
        .fold(None::<(usize, usize)>, |best, cand| match best {
            Some(b) if b.0 >= cand.0 => Some(b),
            _ => Some(cand),
        });
    match best_single {
        Some((covered, i)) if covered > greedy.covered => MaxCovResult {
            chosen: vec![i],
            total_cost: costs[i],
            covered,
        },
        _ => greedy,
    }
}

fn partial_enumeration(gains: &[ElementSet], costs: &[Rational], budget: Rational, ratio: MaxCovResult) -> MaxCovResult {
    let k = gains.len();
    let mut best = ratio;
    let mut consider = |seed: Vec<usize>| {
        let cand = complete_greedy(gains, costs, budget, seed);
        if cand.covered > best.covered {
            best = cand;
        }
    };
    for a in 0..k {
        if costs[a] > budget {
            continue;
        }
        consider(vec![a]);
        for b in a + 1..k {
            if costs[a] + costs[b] > budget {
                continue;
            }
            consider(vec![a, b]);
            for c in b + 1..k {
                if costs[a] + costs[b] + costs[c] <= budget {
                    consider(vec![a, b, c]);
                }
            }
        }
    }
    best
}

/// Extends `seed` greedily by marginal coverage per unit cost, skipping sets
/// that no longer fit.
fn complete_greedy(gains: &[ElementSet], costs: &[Rational], budget: Rational, seed: Vec<usize>) -> MaxCovResult {
    let k = gains.len();
    let mut taken = vec![false; k];
    let mut covered = ElementSet::with_capacity(gains.first().map_or(0, |g| g.len()));
    let mut spent = Rational::zero();
    for &s in &seed {
        taken[s] = true;
        covered.union_with(&gains[s]);
        spent += costs[s];
    }
    let mut chosen = seed;
    loop {
        let left = budget - spent;
        let mut best: Option<(usize, usize)> = None;
        for i in 0..k {
            if taken[i] || costs[i] > left {
                continue;
            }
            let gain = gains[i].difference_count(&covered);
            if gain == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bg)) => compare_ratio(gain, costs[i], bg, costs[bi]) == Ordering::Greater,
            };
            if better {
                best = Some((i, gain));
            }
        }
        let Some((i, _)) = best else { break };
        taken[i] = true;
        covered.union_with(&gains[i]);
        spent += costs[i];
        chosen.push(i);
    }
    MaxCovResult {
        chosen,
        total_cost: spent,
        covered: covered.count_ones(..),
    }
}

fn compare_ratio(g1: usize, c1: Rational, g2: usize, c2: Rational) -> Ordering {
    (Rational::from_integer(g1 as i128) * c2).cmp(&(Rational::from_integer(g2 as i128) * c1))
}
