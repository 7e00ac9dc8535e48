use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{LinearProgram, LpSolution, Relation};
use crate::error::{Error, Result};

/// Outcome of re-deriving a simplex vertex in exact arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCheck {
    /// Largest bound violation of the exact basic solution.
    pub primal_violation: f64,
    /// Largest reduced cost with the wrong sign for optimality.
    pub dual_violation: f64,
    pub objective: f64,
    /// Largest gap between the exact and the floating-point values.
    pub max_value_error: f64,
}

impl ExactCheck {
    pub fn optimal(&self) -> bool {
        self.primal_violation <= 1e-9 && self.dual_violation <= 1e-9
    }
}

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// Rebuilds the final basis of `sol` with exact rationals and checks primal
/// and dual feasibility.
pub fn verify_exact(lp: &LinearProgram, sol: &LpSolution) -> Result<ExactCheck> {
    let basis = sol
        .basis
        .as_ref()
        .ok_or_else(|| Error::Validation("solution carries no basis".into()))?;
    let n = lp.num_vars();
    let rows = lp.constraints.len();
    let cols = n + rows + basis.artificials.len();

    let column = |j: usize| -> Vec<BigRational> {
        let mut col = vec![BigRational::zero(); rows];
        if j < n {
            for (i, row) in lp.constraints.iter().enumerate() {
                col[i] = q(row.coefficients[j]);
            }
        } else if j < n + rows {
            col[j - n] = q(1.0);
        } else {
            let (r, s) = basis.artificials[j - n - rows];
            col[r] = q(s);
        }
        col
    };
    let bounds = |j: usize| -> (Option<BigRational>, Option<BigRational>) {
        if j < n {
            let (lo, hi) = lp.bounds[j];
            (Some(q(lo)), hi.is_finite().then(|| q(hi)))
        } else if j < n + rows {
            match lp.constraints[j - n].relation {
                Relation::Le => (Some(q(0.0)), None),
                Relation::Ge => (None, Some(q(0.0))),
                Relation::Eq => (Some(q(0.0)), Some(q(0.0))),
            }
        } else {
            (Some(q(0.0)), Some(q(0.0)))
        }
    };
    let cost = |j: usize| if j < n { q(lp.objective[j]) } else { BigRational::zero() };

    let mut is_basic = vec![false; cols];
    for &b in &basis.basic {
        is_basic[b] = true;
    }
    let mut x = vec![BigRational::zero(); cols];
    for j in 0..cols {
        if !is_basic[j] {
            let (lo, hi) = bounds(j);
            x[j] = if basis.at_upper[j] { hi } else { lo }.unwrap_or_else(BigRational::zero);
        }
    }
    let mut rhs: Vec<BigRational> = lp.constraints.iter().map(|c| q(c.rhs)).collect();
    for j in 0..cols {
        if !is_basic[j] && !x[j].is_zero() {
            for (i, a) in column(j).into_iter().enumerate() {
                rhs[i] -= a * &x[j];
            }
        }
    }
    let b_cols: Vec<Vec<BigRational>> = basis.basic.iter().map(|&b| column(b)).collect();
    // B[i][r] = b_cols[r][i]
    let b_mat: Vec<Vec<BigRational>> = (0..rows).map(|i| (0..rows).map(|r| b_cols[r][i].clone()).collect()).collect();
    let xb = gauss_solve(b_mat.clone(), rhs).ok_or_else(|| Error::NumericalFailure("singular final basis".into()))?;
    for (r, &b) in basis.basic.iter().enumerate() {
        x[b] = xb[r].clone();
    }

    let mut primal = BigRational::zero();
    for (j, xj) in x.iter().enumerate() {
        let (lo, hi) = bounds(j);
        if let Some(lo) = lo {
            if *xj < lo {
                primal = primal.max(&lo - xj);
            }
        }
        if let Some(hi) = hi {
            if *xj > hi {
                primal = primal.max(xj - &hi);
            }
        }
    }

    // Duals: B^T y = c_B.
    let bt: Vec<Vec<BigRational>> = (0..rows).map(|r| b_cols[r].clone()).collect();
    let cb: Vec<BigRational> = basis.basic.iter().map(|&b| cost(b)).collect();
    let y = gauss_solve(bt, cb).ok_or_else(|| Error::NumericalFailure("singular final basis".into()))?;
    let mut dual = BigRational::zero();
    for j in 0..cols {
        if is_basic[j] {
            continue;
        }
        let (lo, hi) = bounds(j);
        if lo.is_some() && lo == hi {
            continue;
        }
        let col = column(j);
        let mut d = cost(j);
        for (yi, a) in y.iter().zip(&col) {
            d -= yi * a;
        }
        let wrong = if basis.at_upper[j] { -d } else { d };
        if wrong.is_positive() {
            dual = dual.max(wrong);
        }
    }

    let objective: BigRational = (0..n).map(|j| cost(j) * &x[j]).fold(BigRational::zero(), |a, b| a + b);
    let max_value_error = (0..n)
        .map(|j| (x[j].to_f64().unwrap_or(f64::NAN) - sol.values[j]).abs())
        .fold(0.0, f64::max);
    Ok(ExactCheck {
        primal_violation: primal.to_f64().unwrap_or(f64::INFINITY),
        dual_violation: dual.to_f64().unwrap_or(f64::INFINITY),
        objective: objective.to_f64().unwrap_or(f64::NAN),
        max_value_error,
    })
}

fn gauss_solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

