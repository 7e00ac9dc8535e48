//! Small dense linear programs.
//!
//! [`solve_lp`] runs a two-phase bounded-variable primal simplex. The final
//! basis is kept in [`LpSolution::basis`] so that [`verify_exact`] can
//! re-derive the vertex in exact rational arithmetic.

mod exact;
mod format;
mod simplex;

pub use exact::{verify_exact, ExactCheck};
pub use format::to_lp_format;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feasibility tolerance on constraint rows.
pub const ROW_TOLERANCE: f64 = 1e-8;
/// Feasibility tolerance on variable bounds.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize objective . x` subject to rows and `lo <= x <= hi`.
///
/// Lower bounds must be finite; upper bounds may be `f64::INFINITY`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
    pub names: Option<Vec<String>>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
            names: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Validation(format!("bounds: expected {n} entries")));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("objective: non-finite coefficient".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coefficients.len() != n {
                return Err(Error::Validation(format!("constraints[{i}]: expected {n} coefficients")));
            }
            if !row.rhs.is_finite() || row.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::Validation(format!("constraints[{i}]: non-finite entry")));
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || lo < 0.0 || hi < lo || hi.is_nan() {
                return Err(Error::Validation(format!("bounds[{j}]: need 0 <= lo <= hi, lo finite")));
            }
        }
        Ok(())
    }

    /// Largest violation of any row by `x`.
    pub fn row_residual(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|row| {
                let lhs: f64 = row.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
                match row.relation {
                    Relation::Le => (lhs - row.rhs).max(0.0),
                    Relation::Ge => (row.rhs - lhs).max(0.0),
                    Relation::Eq => (lhs - row.rhs).abs(),
                }
            })
            .fold(0.0, f64::max)
    }

    /// Largest violation of any bound by `x`.
    pub fn bound_residual(&self, x: &[f64]) -> f64 {
        self.bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Final simplex basis in the extended variable space
/// `[structural | slack per row | artificial per listed row]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisInfo {
    pub basic: Vec<usize>,
    pub at_upper: Vec<bool>,
    /// `(row, sign)` for every artificial column, in column order.
    pub artificials: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub pivots: usize,
    pub basis: Option<BasisInfo>,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check()?;
    match simplex::solve(lp, false) {
        Ok(sol) => Ok(sol),
        Err(_) => simplex::solve(lp, true),
    }
}

/// True when the relaxation value is at least the integral optimum.
pub fn lp_upper_bounds_ilp(solution: &LpSolution, ilp_opt: i64) -> bool {
    solution.objective_value >= ilp_opt as f64 - 1e-6
}
