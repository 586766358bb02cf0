//! Exact feasibility of systems of non-strict linear inequalities over the
//! rationals.
//!
//! [`LinearSystem::feasible`] runs a phase-one simplex in exact arithmetic;
//! [`LinearSystem::fourier_motzkin_feasible`] is an independent eliminator
//! for tiny systems, used to cross-check it.

mod fourier_motzkin;
mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use fourier_motzkin::MAX_FM_VARIABLES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

/// `coefficients . x  (<= | >=)  bound`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub bound: Rational,
}

impl LinearConstraint {
    pub fn new(coefficients: Vec<Rational>, relation: Relation, bound: Rational) -> Self {
        LinearConstraint {
            coefficients,
            relation,
            bound,
        }
    }

    pub fn le(coefficients: Vec<Rational>, bound: Rational) -> Self {
        Self::new(coefficients, Relation::Le, bound)
    }

    pub fn ge(coefficients: Vec<Rational>, bound: Rational) -> Self {
        Self::new(coefficients, Relation::Ge, bound)
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coefficients.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.bound,
            Relation::Ge => lhs >= self.bound,
        }
    }

    /// Same constraint as `a . x <= b`.
    pub(crate) fn as_le(&self) -> (Vec<Rational>, Rational) {
        match self.relation {
            Relation::Le => (self.coefficients.clone(), self.bound.clone()),
            Relation::Ge => (
                self.coefficients.iter().map(|a| -a).collect(),
                -&self.bound,
            ),
        }
    }

    /// Multiplies both sides by a positive factor.
    pub fn scaled(&self, factor: &Rational) -> Self {
        assert!(factor.is_positive());
        LinearConstraint {
            coefficients: self.coefficients.iter().map(|a| a * factor).collect(),
            relation: self.relation,
            bound: &self.bound * factor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// A point satisfying every constraint exactly.
    Feasible(Vec<Rational>),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            FeasibilityResult::Feasible(x) => Some(x),
            FeasibilityResult::Infeasible => None,
        }
    }
}

/// Variables `x_0 .. x_{n-1}`, a list of constraints and the subset of
/// variables restricted to be nonnegative (the others are free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub constraints: Vec<LinearConstraint>,
    pub nonneg: BTreeSet<usize>,
}

impl LinearSystem {
    pub fn new(
        num_vars: usize,
        constraints: Vec<LinearConstraint>,
        nonneg: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let system = LinearSystem {
            num_vars,
            constraints,
            nonneg: nonneg.into_iter().collect(),
        };
        system.check()?;
        Ok(system)
    }

    fn check(&self) -> Result<()> {
        for (r, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != self.num_vars {
                return Err(Error::Dimension(format!(
                    "constraint {} has {} coefficients for {} variables",
                    r + 1,
                    c.coefficients.len(),
                    self.num_vars
                )));
            }
        }
        if let Some(&j) = self.nonneg.iter().find(|&&j| j >= self.num_vars) {
            return Err(Error::Dimension(format!(
                "nonnegative variable x{} does not exist ({} variables)",
                j + 1,
                self.num_vars
            )));
        }
        Ok(())
    }

    /// Every constraint and sign restriction holds exactly at `x`.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && self.nonneg.iter().all(|&j| !x[j].is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
    }

    /// Exact phase-one simplex with Bland's rule. Any returned witness has
    /// been re-substituted into every constraint.
    pub fn feasible(&self) -> Result<FeasibilityResult> {
        self.check()?;
        let result = simplex::phase_one(self)?;
        if let FeasibilityResult::Feasible(x) = &result {
            if !self.is_satisfied_by(x) {
                return Err(Error::Internal(
                    "simplex witness fails re-substitution".into(),
                ));
            }
        }
        Ok(result)
    }

    /// Fourier-Motzkin elimination; exponential, limited to
    /// [`MAX_FM_VARIABLES`] variables.
    pub fn fourier_motzkin_feasible(&self) -> Result<bool> {
        self.check()?;
        fourier_motzkin::feasible(self)
    }
}

/// One inequality per line, e.g. `x1 - 2 x3 <= 5`, then the sign
/// restrictions.
impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            let mut first = true;
            for (j, a) in c.coefficients.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mag = a.abs();
                let sign = if a.is_negative() { "-" } else { "+" };
                if first {
                    if a.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                if mag == Rational::one() {
                    write!(f, "x{}", j + 1)?;
                } else {
                    write!(f, "{mag} x{}", j + 1)?;
                }
                first = false;
            }
            if first {
                write!(f, "0")?;
            }
            writeln!(f, " {} {}", c.relation, c.bound)?;
        }
        for j in &self.nonneg {
            writeln!(f, "x{} >= 0", j + 1)?;
        }
        Ok(())
    }
}
