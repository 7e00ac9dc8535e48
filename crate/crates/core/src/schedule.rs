//! Assignments, schedules and their cost, coverage and density.

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ElementSet, ProblemInstance};
use crate::rational::{Cost, DensityValue, Rational};

/// Sets placed on machines, without timing. Order within a machine is kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub per_machine: Vec<Vec<usize>>,
}

impl Assignment {
    pub fn empty(m: usize) -> Self {
        Assignment {
            per_machine: vec![Vec::new(); m],
        }
    }

    pub fn new(per_machine: Vec<Vec<usize>>) -> Result<Self> {
        let a = Assignment { per_machine };
        a.check_distinct()?;
        Ok(a)
    }

    pub fn is_empty(&self) -> bool {
        self.per_machine.iter().all(Vec::is_empty)
    }

    pub fn num_sets(&self) -> usize {
        self.per_machine.iter().map(Vec::len).sum()
    }

    pub fn sets(&self) -> impl Iterator<Item = usize> + '_ {
        self.per_machine.iter().flatten().copied()
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for s in self.sets() {
            if !seen.insert(s) {
                return Err(Error::DuplicateSet(s));
            }
        }
        Ok(())
    }

    /// Per-machine total cost.
    pub fn loads(&self, inst: &ProblemInstance) -> Result<Vec<Rational>> {
        check_machines(inst, self.per_machine.len())?;
        self.per_machine
            .iter()
            .enumerate()
            .map(|(j, sets)| {
                let mut load = Rational::zero();
                for (i, &s) in sets.iter().enumerate() {
                    inst.check_set(s, &format!("per_machine[{j}][{i}]"))?;
                    match inst.cost(s, j) {
                        Cost::Finite(c) => load += c,
                        Cost::Infinite => return Err(Error::InfiniteCost { set: s, machine: j }),
                    }
                }
                Ok(load)
            })
            .collect()
    }

    /// `spr(F)`: cost of the most loaded machine.
    pub fn makespan(&self, inst: &ProblemInstance) -> Result<Rational> {
        Ok(self.loads(inst)?.into_iter().max().unwrap_or_else(Rational::zero))
    }
}

/// Per-machine sequences with optional idle time before each set.
///
/// `delays`, when non-empty, has the same shape as `per_machine`; entry
/// `delays[j][i]` is idle time inserted before the `i`-th set on machine `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub per_machine: Vec<Vec<usize>>,
    pub delays: Vec<Vec<Rational>>,
}

impl Schedule {
    pub fn new(per_machine: Vec<Vec<usize>>) -> Self {
        Schedule {
            per_machine,
            delays: Vec::new(),
        }
    }

    pub fn empty(m: usize) -> Self {
        Schedule::new(vec![Vec::new(); m])
    }

    pub fn delay(&self, j: usize, i: usize) -> Rational {
        self.delays
            .get(j)
            .and_then(|d| d.get(i))
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    pub fn has_delays(&self) -> bool {
        self.delays.iter().flatten().any(|d| !d.is_zero())
    }

    /// Appends `s` to machine `j` after `delay` units of idle time.
    pub fn push(&mut self, j: usize, s: usize, delay: Rational) {
        if !delay.is_zero() && self.delays.is_empty() {
            self.delays = self.per_machine.iter().map(|seq| vec![Rational::zero(); seq.len()]).collect();
        }
        self.per_machine[j].push(s);
        if !self.delays.is_empty() {
            self.delays[j].push(delay);
        }
    }

    pub fn sets(&self) -> impl Iterator<Item = usize> + '_ {
        self.per_machine.iter().flatten().copied()
    }

    pub fn num_sets(&self) -> usize {
        self.per_machine.iter().map(Vec::len).sum()
    }

    /// Start and finish time of every scheduled set, indexed by set.
    pub fn timing(&self, inst: &ProblemInstance) -> Result<Vec<Option<(Rational, Rational)>>> {
        check_machines(inst, self.per_machine.len())?;
        if !self.delays.is_empty() {
            if self.delays.len() != self.per_machine.len()
                || self.delays.iter().zip(&self.per_machine).any(|(d, p)| d.len() != p.len())
            {
                return Err(Error::Validation("delays: shape does not match per_machine".into()));
            }
        }
        let mut out = vec![None; inst.k()];
        for (j, seq) in self.per_machine.iter().enumerate() {
            let mut t = Rational::zero();
            for (i, &s) in seq.iter().enumerate() {
                inst.check_set(s, &format!("per_machine[{j}][{i}]"))?;
                if out[s].is_some() {
                    return Err(Error::DuplicateSet(s));
                }
                let d = self.delay(j, i);
                if d < Rational::zero() {
                    return Err(Error::Validation(format!("delays[{j}][{i}]: negative idle time")));
                }
                let c = inst.cost(s, j).finite().ok_or(Error::InfiniteCost { set: s, machine: j })?;
                let start = t + d;
                t = start + c;
                out[s] = Some((start, t));
            }
        }
        Ok(out)
    }

    /// Latest finish time over all machines.
    pub fn length(&self, inst: &ProblemInstance) -> Result<Rational> {
        Ok(self
            .timing(inst)?
            .into_iter()
            .flatten()
            .map(|(_, f)| f)
            .max()
            .unwrap_or_else(Rational::zero))
    }

    pub fn as_assignment(&self) -> Assignment {
        Assignment {
            per_machine: self.per_machine.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleCost {
    pub total: Rational,
    pub cover_times: Vec<Rational>,
}

/// Sum over elements of their covering time.
pub fn evaluate_schedule_cost(inst: &ProblemInstance, sched: &Schedule) -> Result<ScheduleCost> {
    let timing = sched.timing(inst)?;
    let mut cover: Vec<Option<Rational>> = vec![None; inst.n()];
    for (s, t) in timing.iter().enumerate() {
        if let Some((_, ft)) = t {
            for &u in inst.set(s) {
                match &cover[u] {
                    Some(c) if c <= ft => {}
                    _ => cover[u] = Some(*ft),
                }
            }
        }
    }
    let mut total = Rational::zero();
    let mut cover_times = Vec::with_capacity(inst.n());
    for (u, c) in cover.into_iter().enumerate() {
        let c = c.ok_or(Error::UncoveredElement(u))?;
        total += c;
        cover_times.push(c);
    }
    Ok(ScheduleCost { total, cover_times })
}

/// `cov(family, restrict_to)`.
pub fn coverage(inst: &ProblemInstance, family: &[usize], restrict_to: &ElementSet) -> Result<ElementSet> {
    let mut out = FixedBitSet::with_capacity(inst.n());
    for (i, &s) in family.iter().enumerate() {
        inst.check_set(s, &format!("family[{i}]"))?;
        out.union_with(inst.set_bits(s));
    }
    out.intersect_with(restrict_to);
    Ok(out)
}

/// `|cov(F, restrict_to)| / spr(F)`.
pub fn density(inst: &ProblemInstance, asg: &Assignment, restrict_to: &ElementSet) -> Result<DensityValue> {
    if asg.is_empty() {
        return Err(Error::EmptyAssignment);
    }
    let makespan = asg.makespan(inst)?;
    if makespan <= Rational::zero() {
        return Err(Error::EmptyAssignment);
    }
    let family: Vec<usize> = asg.sets().collect();
    let covered = coverage(inst, &family, restrict_to)?.count_ones(..) as u64;
    Ok(DensityValue::new(covered, makespan))
}

fn check_machines(inst: &ProblemInstance, got: usize) -> Result<()> {
    if got != inst.m() {
        return Err(Error::Validation(format!(
            "per_machine: expected {} machines, found {got}",
            inst.m()
        )));
    }
    Ok(())
}
