//! Linear feasibility and optimisation over exact rationals (or `f64`).
//!
//! The solver is a textbook two-phase simplex using Bland's rule, so results
//! are deterministic for a given system. See [`simplex`] for the
//! standard-form conversion.

pub mod linalg;
pub mod polyhedron;
mod simplex;

use std::fmt;

use thiserror::Error;

use crate::scalar::{Scalar, Tolerance};

pub use polyhedron::{analyze_polyhedron, is_subset, polyhedron_dimension, DimensionInfo};

/// Pivot ceiling guarding against cycling in float mode.
pub const DEFAULT_MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("system is infeasible")]
    InfeasibleSystem,
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(usize),
}

/// `coeffs . x (=|<=) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
}

impl<T: Scalar> LinearConstraint<T> {
    pub fn new(coeffs: Vec<T>, rhs: T) -> Self {
        LinearConstraint { coeffs, rhs }
    }

    pub fn lhs(&self, x: &[T]) -> T {
        crate::scalar::dot(&self.coeffs, x)
    }
}

/// Equalities, `<=` inequalities and optional per-variable lower bounds.
/// Variables without a lower bound are free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    pub num_vars: usize,
    pub equalities: Vec<LinearConstraint<T>>,
    pub inequalities: Vec<LinearConstraint<T>>,
    pub lower_bounds: Vec<Option<T>>,
    pub names: Vec<String>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            lower_bounds: vec![None; num_vars],
            names: (0..num_vars).map(|j| format!("x{j}")).collect(),
        }
    }

    pub fn add_equality(&mut self, coeffs: Vec<T>, rhs: T) -> &mut Self {
        self.equalities.push(LinearConstraint::new(coeffs, rhs));
        self
    }

    pub fn add_inequality(&mut self, coeffs: Vec<T>, rhs: T) -> &mut Self {
        self.inequalities.push(LinearConstraint::new(coeffs, rhs));
        self
    }

    /// Adds `sum coeff * x[var] = rhs` from `(var, coeff)` pairs.
    pub fn add_sparse_equality(&mut self, terms: &[(usize, T)], rhs: T) -> &mut Self {
        let coeffs = self.densify(terms);
        self.add_equality(coeffs, rhs)
    }

    pub fn add_sparse_inequality(&mut self, terms: &[(usize, T)], rhs: T) -> &mut Self {
        let coeffs = self.densify(terms);
        self.add_inequality(coeffs, rhs)
    }

    fn densify(&self, terms: &[(usize, T)]) -> Vec<T> {
        let mut coeffs = vec![T::zero(); self.num_vars];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        coeffs
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: T) -> &mut Self {
        self.lower_bounds[var] = Some(bound);
        self
    }

    pub fn set_name(&mut self, var: usize, name: impl Into<String>) -> &mut Self {
        self.names[var] = name.into();
        self
    }

    pub fn num_constraints(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars;
        for (kind, rows) in [("equality", &self.equalities), ("inequality", &self.inequalities)] {
            if let Some((i, c)) = rows.iter().enumerate().find(|(_, c)| c.coeffs.len() != n) {
                return Err(LpError::Malformed(format!(
                    "{kind} {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        if self.lower_bounds.len() != n {
            return Err(LpError::Malformed(format!(
                "{} lower bounds for {n} variables",
                self.lower_bounds.len()
            )));
        }
        if self.names.len() != n {
            return Err(LpError::Malformed(format!(
                "{} names for {n} variables",
                self.names.len()
            )));
        }
        Ok(())
    }

    /// Largest constraint violation of `x` (zero when feasible).
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        let mut bump = |v: T| {
            if v > worst {
                worst = v;
            }
        };
        for c in &self.equalities {
            bump((c.lhs(x) - &c.rhs).abs_val());
        }
        for c in &self.inequalities {
            bump(c.lhs(x) - &c.rhs);
        }
        for (xj, l) in x.iter().zip(&self.lower_bounds) {
            if let Some(l) = l {
                bump(l.clone() - xj);
            }
        }
        worst
    }

    pub fn is_satisfied_by(&self, x: &[T], tol: Tolerance) -> bool {
        x.len() == self.num_vars && !self.max_violation(x).is_positive_tol(tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Feasible => f.write_str("Feasible"),
            Status::Infeasible => f.write_str("Infeasible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult<T> {
    pub status: Status,
    /// Present iff `status == Feasible`.
    pub point: Option<Vec<T>>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Optimum<T> {
    Bounded { value: T, point: Vec<T> },
    Unbounded { point: Vec<T> },
}

/// Solver configuration. The tolerance only matters for `f64` systems.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    pub tol: Tolerance,
    pub max_pivots: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            tol: Tolerance::DEFAULT,
            max_pivots: DEFAULT_MAX_PIVOTS,
        }
    }
}

impl Solver {
    pub fn with_tolerance(tol: Tolerance) -> Self {
        Solver {
            tol,
            ..Solver::default()
        }
    }

    pub fn find_feasible<T: Scalar>(
        &self,
        system: &LinearSystem<T>,
    ) -> Result<FeasibilityResult<T>, LpError> {
        match simplex::prepare(system, self.tol, self.max_pivots)? {
            simplex::Phase1::Infeasible { pivots } => Ok(FeasibilityResult {
                status: Status::Infeasible,
                point: None,
                pivots,
            }),
            simplex::Phase1::Feasible(prep) => {
                let point = prep.point();
                self.check_point(system, &point)?;
                Ok(FeasibilityResult {
                    status: Status::Feasible,
                    point: Some(point),
                    pivots: prep.pivots,
                })
            }
        }
    }

    /// Maximises `objective . x` over the system.
    pub fn max_slack<T: Scalar>(
        &self,
        system: &LinearSystem<T>,
        objective: &[T],
    ) -> Result<Optimum<T>, LpError> {
        let mut out = self.max_many(system, std::slice::from_ref(&objective.to_vec()))?;
        Ok(out.pop().expect("one objective"))
    }

    /// Maximises several objectives over one system, sharing phase 1.
    pub fn max_many<T: Scalar>(
        &self,
        system: &LinearSystem<T>,
        objectives: &[Vec<T>],
    ) -> Result<Vec<Optimum<T>>, LpError> {
        if let Some(o) = objectives.iter().find(|o| o.len() != system.num_vars) {
            return Err(LpError::Malformed(format!(
                "objective has {} coefficients, expected {}",
                o.len(),
                system.num_vars
            )));
        }
        let prep = match simplex::prepare(system, self.tol, self.max_pivots)? {
            simplex::Phase1::Infeasible { .. } => return Err(LpError::InfeasibleSystem),
            simplex::Phase1::Feasible(p) => p,
        };
        objectives
            .iter()
            .map(|obj| {
                let (opt, _) = prep.maximize(obj)?;
                let point = match &opt {
                    Optimum::Bounded { point, .. } | Optimum::Unbounded { point } => point,
                };
                self.check_point(system, point)?;
                Ok(opt)
            })
            .collect()
    }

    fn check_point<T: Scalar>(&self, system: &LinearSystem<T>, x: &[T]) -> Result<(), LpError> {
        let viol = system.max_violation(x);
        if T::EXACT {
            assert!(
                !viol.is_positive_tol(self.tol),
                "exact simplex produced an infeasible point (violation {viol})"
            );
            return Ok(());
        }
        let scale = system
            .equalities
            .iter()
            .chain(&system.inequalities)
            .map(|c| c.rhs.to_f64().abs())
            .fold(1.0, f64::max);
        if viol.to_f64() > self.tol.0 * scale * 10.0 {
            return Err(LpError::NumericalBreakdown(format!(
                "recovered point violates a constraint by {}",
                viol.to_f64()
            )));
        }
        Ok(())
    }
}

/// [`Solver::find_feasible`] with default settings.
pub fn find_feasible<T: Scalar>(system: &LinearSystem<T>) -> Result<FeasibilityResult<T>, LpError> {
    Solver::default().find_feasible(system)
}

/// [`Solver::max_slack`] with default settings.
pub fn max_slack<T: Scalar>(
    system: &LinearSystem<T>,
    objective: &[T],
) -> Result<Optimum<T>, LpError> {
    Solver::default().max_slack(system, objective)
}
