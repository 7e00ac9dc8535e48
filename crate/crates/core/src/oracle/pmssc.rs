//! Branch and bound for the minimum-cost schedule.
//!
//! Schedules are built chronologically: the open machine with the earliest
//! end time (lowest index on ties) either receives another set or is closed.
//! Every schedule has exactly one such construction. Only sets that would
//! lower some element's cover time are placed; dropping any other set never
//! increases the cost.

use num_integer::Integer;

use super::enumerate::identical_predecessors;
use super::{NodeCounter, OracleLimits};
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::rational::{Cost, Rational};
use crate::schedule::Schedule;

const NONE: i128 = i128::MAX;

struct Bnb {
    k: usize,
    m: usize,
    /// Costs scaled to integers; `None` is infinite.
    cost: Vec<Vec<Option<i128>>>,
    sets: Vec<Vec<usize>>,
    containing: Vec<Vec<usize>>,
    prev: Vec<Option<usize>>,
    ends: Vec<i128>,
    open: Vec<bool>,
    seq: Vec<Vec<usize>>,
    used: Vec<bool>,
    ct: Vec<i128>,
    best: i128,
    best_seq: Vec<Vec<usize>>,
    nodes: NodeCounter,
}

impl Bnb {
    fn lower_bound(&self) -> Option<i128> {
        let mut total = 0i128;
        for (u, sets) in self.containing.iter().enumerate() {
            let mut b = self.ct[u];
            for &s in sets.iter().filter(|&&s| !self.used[s]) {
                for j in (0..self.m).filter(|&j| self.open[j]) {
                    if let Some(c) = self.cost[s][j] {
                        b = b.min(self.ends[j] + c);
                    }
                }
            }
            if b == NONE {
                return None;
            }
            total += b;
        }
        Some(total)
    }

    fn dfs(&mut self) -> Result<()> {
        self.nodes.tick()?;
        let Some(lb) = self.lower_bound() else { return Ok(()) };
        if lb >= self.best {
            return Ok(());
        }
        if self.ct.iter().all(|&c| c != NONE) {
            let current: i128 = self.ct.iter().sum();
            if current < self.best {
                self.best = current;
                self.best_seq = self.seq.clone();
            }
            if lb >= self.best {
                return Ok(());
            }
        }
        let Some(j) = (0..self.m).filter(|&j| self.open[j]).min_by_key(|&j| (self.ends[j], j)) else {
            return Ok(());
        };

        let mut options: Vec<(usize, i128, usize)> = Vec::new();
        let first_allowed = match self.prev[j] {
            Some(p) if self.seq[j].is_empty() => self.seq[p].first().map(|&f| f + 1),
            _ => Some(0),
        };
        if let Some(min_first) = first_allowed {
            for s in (0..self.k).filter(|&s| !self.used[s]) {
                if self.seq[j].is_empty() && s < min_first {
                    continue;
                }
                let Some(c) = self.cost[s][j] else { continue };
                let f = self.ends[j] + c;
                let gain = self.sets[s].iter().filter(|&&u| self.ct[u] > f).count();
                if gain > 0 {
                    options.push((s, f, gain));
                }
            }
        }
        // Cheap, wide sets first so good incumbents appear early.
        options.sort_by(|a, b| {
            let (ca, cb) = (a.1 - self.ends[j], b.1 - self.ends[j]);
            (cb * a.2 as i128).cmp(&(ca * b.2 as i128)).reverse().then(a.0.cmp(&b.0))
        });
        for (s, f, _) in options {
            let saved = self.ct.clone();
            for &u in &self.sets[s] {
                self.ct[u] = self.ct[u].min(f);
            }
            let end = self.ends[j];
            self.ends[j] = f;
            self.used[s] = true;
            self.seq[j].push(s);
            self.dfs()?;
            self.seq[j].pop();
            self.used[s] = false;
            self.ends[j] = end;
            self.ct = saved;
        }
        self.open[j] = false;
        self.dfs()?;
        self.open[j] = true;
        Ok(())
    }
}

/// List-scheduling incumbent: repeatedly the (set, machine) pair with the
/// best new-coverage-per-finish-time ratio.
fn heuristic(b: &Bnb) -> Option<(i128, Vec<Vec<usize>>)> {
    let n = b.ct.len();
    let mut ct = vec![NONE; n];
    let mut ends = vec![0i128; b.m];
    let mut used = vec![false; b.k];
    let mut seq = vec![Vec::new(); b.m];
    while ct.contains(&NONE) {
        let mut pick: Option<(usize, usize, i128, usize)> = None;
        for s in (0..b.k).filter(|&s| !used[s]) {
            let gain = b.sets[s].iter().filter(|&&u| ct[u] == NONE).count();
            if gain == 0 {
                continue;
            }
            for j in 0..b.m {
                let Some(c) = b.cost[s][j] else { continue };
                let f = ends[j] + c;
                let better = match pick {
                    None => true,
                    Some((_, _, pf, pg)) => (gain as i128) * pf > (pg as i128) * f,
                };
                if better {
                    pick = Some((s, j, f, gain));
                }
            }
        }
        let (s, j, f, _) = pick?;
        used[s] = true;
        ends[j] = f;
        seq[j].push(s);
        for &u in &b.sets[s] {
            ct[u] = ct[u].min(f);
        }
    }
    Some((ct.iter().sum(), seq))
}

/// Minimum-cost schedule and its cost.
pub fn exact_pmssc(inst: &ProblemInstance, limits: &OracleLimits) -> Result<(Schedule, Rational)> {
    limits.check(inst)?;
    inst.ensure_solvable()?;
    let (k, m) = (inst.k(), inst.m());
    let mut scale = 1i128;
    for s in 0..k {
        for j in 0..m {
            if let Cost::Finite(c) = inst.cost(s, j) {
                scale = scale.lcm(c.denom());
            }
        }
    }
    let cost: Vec<Vec<Option<i128>>> = (0..k)
        .map(|s| {
            (0..m)
                .map(|j| inst.cost(s, j).finite().map(|c| (c * scale).to_integer()))
                .collect()
        })
        .collect();
    let mut containing = vec![Vec::new(); inst.n()];
    for s in 0..k {
        for &u in inst.set(s) {
            containing[u].push(s);
        }
    }
    let mut bnb = Bnb {
        k,
        m,
        cost,
        sets: inst.sets().to_vec(),
        containing,
        prev: identical_predecessors(inst, None),
        ends: vec![0; m],
        open: vec![true; m],
        seq: vec![Vec::new(); m],
        used: vec![false; k],
        ct: vec![NONE; inst.n()],
        best: NONE,
        best_seq: Vec::new(),
        nodes: NodeCounter::new(limits.node_budget),
    };
    if let Some((c, seq)) = heuristic(&bnb) {
        bnb.best = c;
        bnb.best_seq = seq;
    }
    bnb.dfs()?;
    if bnb.best == NONE {
        return Err(Error::Uncoverable(Vec::new()));
    }
    Ok((Schedule::new(bnb.best_seq), Rational::new(bnb.best, scale)))
}
