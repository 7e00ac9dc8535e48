use super::{BasisInfo, LinearProgram, LpSolution, LpStatus, Relation, BOUND_TOLERANCE, ROW_TOLERANCE};
use crate::error::{Error, Result};

const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
const MAX_PIVOTS: usize = 200_000;

enum Outcome {
    Optimal,
    Unbounded,
}

/// Dense tableau `T = B^-1 [A | I | artificial columns]`.
struct Tableau {
    rows: usize,
    cols: usize,
    n: usize,
    t: Vec<f64>,
    beta: Vec<f64>,
    basic: Vec<usize>,
    row_of: Vec<Option<usize>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    at_upper: Vec<bool>,
    d: Vec<f64>,
    bland: bool,
    pivots: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.hi[j]
        } else {
            self.lo[j]
        }
    }

    fn set_costs(&mut self, c: &[f64]) {
        for j in 0..self.cols {
            let mut dj = c[j];
            for i in 0..self.rows {
                let cb = c[self.basic[i]];
                if cb != 0.0 {
                    dj -= cb * self.at(i, j);
                }
            }
            self.d[j] = if self.row_of[j].is_some() { 0.0 } else { dj };
        }
    }

    fn entering(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.row_of[j].is_some() || self.hi[j] - self.lo[j] <= 0.0 {
                continue;
            }
            let dj = self.d[j];
            let improving = if self.at_upper[j] { dj < -COST_TOL } else { dj > COST_TOL };
            if !improving {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            if best.is_none_or(|(_, b)| dj.abs() > b) {
                best = Some((j, dj.abs()));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Moves entering `q` as far as bounds allow. Returns the step length,
    /// or `None` when the objective is unbounded in that direction.
    fn step(&mut self, q: usize) -> Option<f64> {
        let dir = if self.at_upper[q] { -1.0 } else { 1.0 };
        let mut theta = self.hi[q] - self.lo[q];
        let mut leave: Option<(usize, f64, bool)> = None; // (row, |alpha|, to_upper)
        for i in 0..self.rows {
            let alpha = self.at(i, q);
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basic[i];
            let rate = -dir * alpha;
            let (limit, to_upper) = if rate < 0.0 {
                if !self.lo[b].is_finite() {
                    continue;
                }
                (((self.beta[i] - self.lo[b]) / -rate).max(0.0), false)
            } else {
                if !self.hi[b].is_finite() {
                    continue;
                }
                (((self.hi[b] - self.beta[i]) / rate).max(0.0), true)
            };
            let replace = match leave {
                None => limit < theta,
                Some((r, a, _)) => {
                    if limit < theta - DEGENERATE_STEP {
                        true
                    } else if limit <= theta + DEGENERATE_STEP {
                        if self.bland {
                            b < self.basic[r]
                        } else {
                            alpha.abs() > a
                        }
                    } else {
                        false
                    }
                }
            };
            if replace {
                theta = theta.min(limit);
                leave = Some((i, alpha.abs(), to_upper));
            }
        }
        if !theta.is_finite() {
            return None;
        }
        let entering_value = self.nonbasic_value(q) + dir * theta;
        for i in 0..self.rows {
            let alpha = self.at(i, q);
            if alpha != 0.0 {
                self.beta[i] -= dir * theta * alpha;
            }
        }
        match leave {
            None => {
                self.at_upper[q] = !self.at_upper[q];
            }
            Some((r, _, to_upper)) => {
                let out = self.basic[r];
                self.pivot(r, q);
                self.row_of[out] = None;
                self.at_upper[out] = to_upper;
                self.basic[r] = q;
                self.row_of[q] = Some(r);
                self.at_upper[q] = false;
                self.beta[r] = entering_value;
            }
        }
        self.pivots += 1;
        Some(theta)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let p = self.at(r, q);
        for j in 0..cols {
            self.t[r * cols + j] /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for row in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = row[q];
            if f != 0.0 {
                for (x, pv) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * pv;
                }
            }
        }
        let f = self.d[q];
        if f != 0.0 {
            for (x, pv) in self.d.iter_mut().zip(prow.iter()) {
                *x -= f * pv;
            }
        }
    }

    fn optimize(&mut self, bland_from_start: bool) -> Result<Outcome> {
        self.bland = bland_from_start;
        let degenerate_limit = 10 * (self.rows + self.cols);
        let mut degenerate = 0;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::NumericalFailure(format!("no convergence after {MAX_PIVOTS} pivots")));
            }
            let Some(q) = self.entering() else {
                return Ok(Outcome::Optimal);
            };
            let Some(theta) = self.step(q) else {
                return Ok(Outcome::Unbounded);
            };
            if theta <= DEGENERATE_STEP {
                degenerate += 1;
                if degenerate >= degenerate_limit {
                    self.bland = true;
                }
            } else {
                degenerate = 0;
            }
        }
    }

    /// Values of every extended variable, basic ones recomputed from the
    /// nonbasic ones through `B^-1`, which sits in the slack columns.
    fn values(&self, lp: &LinearProgram, art_rows: &[(usize, f64)]) -> Vec<f64> {
        let mut x: Vec<f64> = (0..self.cols).map(|j| self.nonbasic_value(j)).collect();
        let mut rhs: Vec<f64> = lp.constraints.iter().map(|c| c.rhs).collect();
        for j in 0..self.cols {
            if self.row_of[j].is_some() || x[j] == 0.0 {
                continue;
            }
            if j < self.n {
                for (i, row) in lp.constraints.iter().enumerate() {
                    rhs[i] -= row.coefficients[j] * x[j];
                }
            } else if j < self.n + self.rows {
                rhs[j - self.n] -= x[j];
            } else {
                let (row, sign) = art_rows[j - self.n - self.rows];
                rhs[row] -= sign * x[j];
            }
        }
        for i in 0..self.rows {
            let v: f64 = (0..self.rows).map(|k| self.at(i, self.n + k) * rhs[k]).sum();
            let b = self.basic[i];
            x[b] = snap(v, self.lo[b], self.hi[b]);
        }
        x
    }
}

fn snap(v: f64, lo: f64, hi: f64) -> f64 {
    if (v - lo).abs() <= BOUND_TOLERANCE {
        lo
    } else if (v - hi).abs() <= BOUND_TOLERANCE {
        hi
    } else {
        v
    }
}

pub(super) fn solve(lp: &LinearProgram, bland: bool) -> Result<LpSolution> {
    let n = lp.num_vars();
    let rows = lp.constraints.len();

    let mut lo: Vec<f64> = lp.bounds.iter().map(|b| b.0).collect();
    let mut hi: Vec<f64> = lp.bounds.iter().map(|b| b.1).collect();
    for row in &lp.constraints {
        let (l, h) = match row.relation {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };
        lo.push(l);
        hi.push(h);
    }

    // Residual of each row with structurals at their lower bounds.
    let residual: Vec<f64> = lp
        .constraints
        .iter()
        .map(|row| row.rhs - row.coefficients.iter().zip(&lo[..n]).map(|(a, l)| a * l).sum::<f64>())
        .collect();
    let mut art_rows = Vec::new();
    for (i, &r) in residual.iter().enumerate() {
        let s = n + i;
        if r < lo[s] || r > hi[s] {
            art_rows.push((i, if r >= 0.0 { 1.0 } else { -1.0 }));
        }
    }
    let cols = n + rows + art_rows.len();
    for _ in &art_rows {
        lo.push(0.0);
        hi.push(f64::INFINITY);
    }

    let mut tab = Tableau {
        rows,
        cols,
        n,
        t: vec![0.0; rows * cols],
        beta: vec![0.0; rows],
        basic: vec![0; rows],
        row_of: vec![None; cols],
        lo,
        hi,
        at_upper: vec![false; cols],
        d: vec![0.0; cols],
        bland,
        pivots: 0,
    };

    let art_of_row: Vec<Option<usize>> = {
        let mut v = vec![None; rows];
        for (a, &(i, _)) in art_rows.iter().enumerate() {
            v[i] = Some(a);
        }
        v
    };
    for (i, row) in lp.constraints.iter().enumerate() {
        let s = n + i;
        let scale = match art_of_row[i] {
            None => {
                tab.basic[i] = s;
                tab.row_of[s] = Some(i);
                tab.beta[i] = residual[i];
                1.0
            }
            Some(a) => {
                let sign = art_rows[a].1;
                let col = n + rows + a;
                tab.basic[i] = col;
                tab.row_of[col] = Some(i);
                tab.beta[i] = residual[i].abs();
                // The slack sits at whichever of its bounds is finite.
                tab.at_upper[s] = !tab.lo[s].is_finite();
                tab.t[i * cols + col] = 1.0;
                sign
            }
        };
        for j in 0..n {
            tab.t[i * cols + j] = row.coefficients[j] / scale;
        }
        tab.t[i * cols + s] = 1.0 / scale;
    }

    if !art_rows.is_empty() {
        let mut c1 = vec![0.0; cols];
        for c in c1.iter_mut().skip(n + rows) {
            *c = -1.0;
        }
        tab.set_costs(&c1);
        tab.optimize(bland)?;
        let infeasibility: f64 = (n + rows..cols)
            .map(|j| match tab.row_of[j] {
                Some(i) => tab.beta[i],
                None => tab.nonbasic_value(j),
            })
            .sum();
        let scale = 1.0 + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-7 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: vec![0.0; n],
                objective_value: f64::NAN,
                pivots: tab.pivots,
                basis: None,
            });
        }
        for j in n + rows..cols {
            tab.hi[j] = 0.0;
            tab.at_upper[j] = false;
            if let Some(i) = tab.row_of[j] {
                tab.beta[i] = 0.0;
            }
        }
    }

    let mut c2 = lp.objective.clone();
    c2.resize(cols, 0.0);
    tab.set_costs(&c2);
    if let Outcome::Unbounded = tab.optimize(bland)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: vec![0.0; n],
            objective_value: f64::INFINITY,
            pivots: tab.pivots,
            basis: None,
        });
    }

    let x = tab.values(lp, &art_rows);
    let values = x[..n].to_vec();
    let row_res = lp.row_residual(&values);
    let bound_res = lp.bound_residual(&values);
    if row_res > ROW_TOLERANCE || bound_res > BOUND_TOLERANCE {
        return Err(Error::NumericalFailure(format!(
            "residuals too large: rows {row_res:e}, bounds {bound_res:e}"
        )));
    }
    let objective_value = lp.objective.iter().zip(&values).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
        pivots: tab.pivots,
        basis: Some(BasisInfo {
            basic: tab.basic.clone(),
            at_upper: (0..cols).map(|j| tab.row_of[j].is_none() && tab.at_upper[j]).collect(),
            artificials: art_rows,
        }),
    })
}
