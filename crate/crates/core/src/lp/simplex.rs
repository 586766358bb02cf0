//! Phase one through the dual.
//!
//! After splitting free variables, the system is `A z <= b, z >= 0`. Its
//! phase-one problem
//!
//! ```text
//! min t   s.t.  A z - t 1 <= b,  z >= 0,  t >= 0
//! ```
//!
//! is always feasible and bounded below by 0; the original system is
//! feasible iff the optimum is `t = 0`. We solve the LP dual
//!
//! ```text
//! max -b.y   s.t.  -A^T y <= 0,  1.y <= 1,  y >= 0
//! ```
//!
//! whose tableau has one row per primal variable (plus one) instead of one
//! per constraint, and starts from the feasible all-slack basis. The primal
//! optimum is read off the reduced costs of the slack columns.
//! Bland's rule guarantees termination on degenerate pivots.

use super::{FeasibilityResult, LinearSystem};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs `c_B B^-1 F - c`.
    obj: Vec<Rational>,
    value: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn entering(&self) -> Option<usize> {
        self.obj.iter().position(|r| r.is_negative())
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (row, coeffs) in self.rows.iter().enumerate() {
            let a = &coeffs[col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[row] / a;
            best = match best {
                None => Some((row, ratio)),
                Some((b, br)) => {
                    if ratio < br || (ratio == br && self.basis[row] < self.basis[b]) {
                        Some((row, ratio))
                    } else {
                        Some((b, br))
                    }
                }
            };
        }
        best.map(|(row, _)| row)
    }

    fn pivot(&mut self, prow: usize, col: usize) {
        let inv = self.rows[prow][col].recip();
        for a in self.rows[prow].iter_mut() {
            if !a.is_zero() {
                *a = &*a * &inv;
            }
        }
        self.rhs[prow] = &self.rhs[prow] * &inv;
        let pivot_row = self.rows[prow].clone();
        let pivot_rhs = self.rhs[prow].clone();
        for row in 0..self.rows.len() {
            if row == prow {
                continue;
            }
            let factor = self.rows[row][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, p) in self.rows[row].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &(&factor * p);
                }
            }
            self.rhs[row] -= &(&factor * &pivot_rhs);
        }
        let factor = self.obj[col].clone();
        if !factor.is_zero() {
            for (a, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &(&factor * p);
                }
            }
            self.value -= &(&factor * &pivot_rhs);
        }
        self.basis[prow] = col;
    }
}

pub(super) fn phase_one(system: &LinearSystem) -> Result<FeasibilityResult> {
    // Every constraint as a . x <= b.
    let rows_le: Vec<(Vec<Rational>, Rational)> =
        system.constraints.iter().map(|c| c.as_le()).collect();
    let m = rows_le.len();

    // Primal columns: (variable, sign); free variables get two.
    let mut columns: Vec<(usize, bool)> = Vec::new();
    for j in 0..system.num_vars {
        columns.push((j, true));
        if !system.nonneg.contains(&j) {
            columns.push((j, false));
        }
    }
    let k = columns.len();
    let width = m + k + 1;

    let mut rows = Vec::with_capacity(k + 1);
    for (c, &(j, positive)) in columns.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        for (r, (a, _)) in rows_le.iter().enumerate() {
            if !a[j].is_zero() {
                row[r] = if positive { -&a[j] } else { a[j].clone() };
            }
        }
        row[m + c] = Rational::one();
        rows.push(row);
    }
    let mut budget = vec![Rational::zero(); width];
    budget[..m].iter_mut().for_each(|a| *a = Rational::one());
    budget[m + k] = Rational::one();
    rows.push(budget);

    let mut rhs = vec![Rational::zero(); k + 1];
    rhs[k] = Rational::one();
    let mut obj = vec![Rational::zero(); width];
    for (r, (_, b)) in rows_le.iter().enumerate() {
        obj[r] = b.clone();
    }

    let mut tab = Tableau {
        rows,
        rhs,
        obj,
        value: Rational::zero(),
        basis: (m..width).collect(),
    };

    while let Some(col) = tab.entering() {
        let row = tab.leaving(col).ok_or_else(|| {
            Error::Internal("phase-one dual reported unbounded".into())
        })?;
        tab.pivot(row, col);
    }

    let t = tab.obj[m + k].clone();
    if t != tab.value {
        return Err(Error::Internal(format!(
            "duality gap in phase one: t = {t}, dual value = {}",
            tab.value
        )));
    }
    if t.is_positive() {
        return Ok(FeasibilityResult::Infeasible);
    }
    let mut x = vec![Rational::zero(); system.num_vars];
    for (c, &(j, positive)) in columns.iter().enumerate() {
        let z = &tab.obj[m + c];
        if positive {
            x[j] += z;
        } else {
            x[j] -= z;
        }
    }
    Ok(FeasibilityResult::Feasible(x))
}
