//! Dense two-phase simplex with Bland's rule.
//!
//! The system is first brought to standard form:
//! - bounded variables are shifted so their lower bound is zero;
//! - free variables that appear in an equality are eliminated by exact
//!   substitution (and recovered afterwards);
//! - the remaining equalities are row-reduced, dropping dependent rows;
//! - free variables left over are split as `x = x+ - x-`.
//!
//! Phase 1 minimises the sum of artificials. The resulting feasible tableau
//! can be reused for any number of phase-2 objectives.

use std::cmp::Ordering;

use super::linalg::{Insert, RowBasis};
use super::{LinearSystem, LpError, Optimum};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, Copy)]
enum ColMap {
    Bounded(usize),
    Split(usize, usize),
    Eliminated,
}

/// `x[var] = rhs - sum_j coeffs[j] * x[j]` in shifted coordinates.
#[derive(Debug, Clone)]
struct Elimination<T> {
    var: usize,
    coeffs: Vec<T>,
    rhs: T,
}

#[derive(Debug, Clone)]
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    ncols: usize,
}

enum RunEnd {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize, tol: Tolerance) {
        let ncols = self.ncols;
        let inv = T::one() / &self.rows[r][c];
        let nz: Vec<usize> = (0..=ncols)
            .filter(|&j| !self.rows[r][j].is_zero_tol(tol))
            .collect();
        for &j in &nz {
            self.rows[r][j] *= inv.clone();
        }
        self.rows[r][c] = T::one();
        let prow = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            eliminate(row, &prow, &nz, c, tol);
        }
        eliminate(&mut self.obj, &prow, &nz, c, tol);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Smallest-index column with negative reduced cost.
    fn entering(&self, limit: usize, tol: Tolerance) -> Option<usize> {
        (0..limit).find(|&j| self.obj[j].is_negative_tol(tol))
    }

    /// Minimum ratio row; ties go to the smallest basic index.
    fn leaving(&self, c: usize, tol: Tolerance) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[c].is_positive_tol(tol) {
                continue;
            }
            let ratio = row[self.ncols].clone() / &row[c];
            let replace = match &best {
                None => true,
                Some((bi, br)) => match ratio.cmp_tol(br, tol) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basis[i] < self.basis[*bi],
                    Ordering::Greater => false,
                },
            };
            if replace {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn run(
        &mut self,
        limit: usize,
        tol: Tolerance,
        pivots: &mut usize,
        max_pivots: usize,
    ) -> Result<RunEnd, LpError> {
        loop {
            let Some(c) = self.entering(limit, tol) else {
                return Ok(RunEnd::Optimal);
            };
            let Some(r) = self.leaving(c, tol) else {
                return Ok(RunEnd::Unbounded);
            };
            self.pivot(r, c, tol);
            *pivots += 1;
            if *pivots > max_pivots {
                return Err(LpError::PivotLimit(max_pivots));
            }
        }
    }

    fn column_values(&self) -> Vec<T> {
        let mut vals = vec![T::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            vals[b] = row[self.ncols].clone();
        }
        vals
    }
}

fn eliminate<T: Scalar>(row: &mut [T], prow: &[T], nz: &[usize], c: usize, tol: Tolerance) {
    if row[c].is_zero_tol(tol) {
        return;
    }
    let f = row[c].clone();
    for &j in nz {
        row[j] -= f.clone() * &prow[j];
    }
    row[c] = T::zero();
}

/// A system that passed phase 1, ready for phase-2 objectives.
#[derive(Debug, Clone)]
pub(crate) struct Prepared<T> {
    n: usize,
    shifts: Vec<Option<T>>,
    elims: Vec<Elimination<T>>,
    cols: Vec<ColMap>,
    n_struct: usize,
    n_enter: usize,
    tab: Tableau<T>,
    tol: Tolerance,
    max_pivots: usize,
    pub(crate) pivots: usize,
}

pub(crate) enum Phase1<T> {
    Infeasible { pivots: usize },
    Feasible(Prepared<T>),
}

struct Row<T> {
    coeffs: Vec<T>,
    rhs: T,
}

pub(crate) fn prepare<T: Scalar>(
    sys: &LinearSystem<T>,
    tol: Tolerance,
    max_pivots: usize,
) -> Result<Phase1<T>, LpError> {
    sys.validate()?;
    let n = sys.num_vars;
    let shifts: Vec<Option<T>> = sys.lower_bounds.clone();

    let shift_row = |coeffs: &[T], rhs: &T| -> Row<T> {
        let mut r = rhs.clone();
        for (a, l) in coeffs.iter().zip(&shifts) {
            if let Some(l) = l {
                if !a.is_zero_tol(tol) {
                    r -= a.clone() * l;
                }
            }
        }
        Row {
            coeffs: coeffs.to_vec(),
            rhs: r,
        }
    };
    let mut eqs: Vec<Option<Row<T>>> = sys
        .equalities
        .iter()
        .map(|c| Some(shift_row(&c.coeffs, &c.rhs)))
        .collect();
    let mut ineqs: Vec<Row<T>> = sys
        .inequalities
        .iter()
        .map(|c| shift_row(&c.coeffs, &c.rhs))
        .collect();

    // Eliminate free variables through equalities.
    let mut eliminated = vec![false; n];
    let mut elims = Vec::new();
    for r in 0..eqs.len() {
        let Some(row) = eqs[r].as_ref() else { continue };
        let Some(f) = (0..n).find(|&j| {
            shifts[j].is_none() && !eliminated[j] && !row.coeffs[j].is_zero_tol(tol)
        }) else {
            continue;
        };
        let row = eqs[r].take().expect("checked above");
        let inv = T::one() / &row.coeffs[f];
        let mut coeffs: Vec<T> = row.coeffs.iter().map(|a| a.clone() * &inv).collect();
        coeffs[f] = T::zero();
        let rhs = row.rhs * &inv;
        let nz: Vec<usize> = (0..n).filter(|&j| !coeffs[j].is_zero_tol(tol)).collect();
        let substitute = |target: &mut Row<T>| {
            if target.coeffs[f].is_zero_tol(tol) {
                return;
            }
            let b = std::mem::replace(&mut target.coeffs[f], T::zero());
            for &j in &nz {
                target.coeffs[j] -= b.clone() * &coeffs[j];
            }
            target.rhs -= b * &rhs;
        };
        for other in eqs.iter_mut().flatten() {
            substitute(other);
        }
        for other in ineqs.iter_mut() {
            substitute(other);
        }
        eliminated[f] = true;
        elims.push(Elimination {
            var: f,
            coeffs,
            rhs,
        });
    }

    // Row-reduce the remaining equalities.
    let mut basis = RowBasis::new(n, n + 1, tol);
    for row in eqs.into_iter().flatten() {
        let mut aug = row.coeffs;
        aug.push(row.rhs);
        if basis.insert(&aug) == Insert::Inconsistent {
            return Ok(Phase1::Infeasible { pivots: 0 });
        }
    }
    let eq_rows: Vec<Row<T>> = basis
        .rows()
        .iter()
        .map(|aug| Row {
            coeffs: aug[..n].to_vec(),
            rhs: aug[n].clone(),
        })
        .collect();

    let mut cols = Vec::with_capacity(n);
    let mut n_struct = 0;
    for j in 0..n {
        if eliminated[j] {
            cols.push(ColMap::Eliminated);
        } else if shifts[j].is_some() {
            cols.push(ColMap::Bounded(n_struct));
            n_struct += 1;
        } else {
            cols.push(ColMap::Split(n_struct, n_struct + 1));
            n_struct += 2;
        }
    }

    let n_slack = ineqs.len();
    let needs_art: Vec<bool> = eq_rows
        .iter()
        .map(|_| true)
        .chain(ineqs.iter().map(|r| r.rhs.is_negative_tol(tol)))
        .collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let ncols = n_struct + n_slack + n_art;

    let structural = |row: &Row<T>| -> Vec<T> {
        let mut out = vec![T::zero(); ncols + 1];
        for (j, a) in row.coeffs.iter().enumerate() {
            if a.is_zero_tol(tol) {
                continue;
            }
            match cols[j] {
                ColMap::Bounded(c) => out[c] = a.clone(),
                ColMap::Split(p, m) => {
                    out[p] = a.clone();
                    out[m] = -a.clone();
                }
                ColMap::Eliminated => {}
            }
        }
        out[ncols] = row.rhs.clone();
        out
    };

    let mut rows = Vec::with_capacity(eq_rows.len() + ineqs.len());
    let mut bas = Vec::with_capacity(rows.capacity());
    let mut next_art = n_struct + n_slack;
    for row in &eq_rows {
        let mut t = structural(row);
        if t[ncols].is_negative_tol(tol) {
            negate(&mut t);
        }
        t[next_art] = T::one();
        bas.push(next_art);
        next_art += 1;
        rows.push(t);
    }
    for (k, row) in ineqs.iter().enumerate() {
        let mut t = structural(row);
        t[n_struct + k] = T::one();
        if t[ncols].is_negative_tol(tol) {
            negate(&mut t);
            t[next_art] = T::one();
            bas.push(next_art);
            next_art += 1;
        } else {
            bas.push(n_struct + k);
        }
        rows.push(t);
    }

    let mut obj = vec![T::zero(); ncols + 1];
    for (row, &b) in rows.iter().zip(&bas) {
        if b >= n_struct + n_slack {
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= v;
            }
            obj[b] = T::zero();
        }
    }

    let mut tab = Tableau {
        rows,
        obj,
        basis: bas,
        ncols,
    };
    let mut pivots = 0;
    tab.run(ncols, tol, &mut pivots, max_pivots)?;
    let infeasibility = -tab.obj[ncols].clone();
    if infeasibility.is_positive_tol(tol) {
        return Ok(Phase1::Infeasible { pivots });
    }

    // Drive remaining (zero-level) artificials out of the basis.
    let n_enter = n_struct + n_slack;
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] < n_enter {
            i += 1;
            continue;
        }
        match (0..n_enter).find(|&j| !tab.rows[i][j].is_zero_tol(tol)) {
            Some(j) => {
                tab.pivot(i, j, tol);
                pivots += 1;
                i += 1;
            }
            None => {
                tab.rows.remove(i);
                tab.basis.remove(i);
            }
        }
    }

    Ok(Phase1::Feasible(Prepared {
        n,
        shifts,
        elims,
        cols,
        n_struct,
        n_enter,
        tab,
        tol,
        max_pivots,
        pivots,
    }))
}

fn negate<T: Scalar>(row: &mut [T]) {
    for v in row.iter_mut() {
        *v = -std::mem::replace(v, T::zero());
    }
}

impl<T: Scalar> Prepared<T> {
    /// Current basic feasible solution in original coordinates.
    pub(crate) fn point(&self) -> Vec<T> {
        self.recover(&self.tab)
    }

    fn recover(&self, tab: &Tableau<T>) -> Vec<T> {
        let vals = tab.column_values();
        let mut x = vec![T::zero(); self.n];
        for (j, map) in self.cols.iter().enumerate() {
            match *map {
                ColMap::Bounded(c) => x[j] = vals[c].clone(),
                ColMap::Split(p, m) => x[j] = vals[p].clone() - &vals[m],
                ColMap::Eliminated => {}
            }
        }
        for e in self.elims.iter().rev() {
            let mut v = e.rhs.clone();
            for (a, xj) in e.coeffs.iter().zip(&x) {
                if !a.is_zero_tol(self.tol) {
                    v -= a.clone() * xj;
                }
            }
            x[e.var] = v;
        }
        for (xj, l) in x.iter_mut().zip(&self.shifts) {
            if let Some(l) = l {
                *xj += l;
            }
        }
        x
    }

    /// Runs phase 2 for `maximize objective . x`; returns the optimum and
    /// the phase-2 pivot count.
    pub(crate) fn maximize(&self, objective: &[T]) -> Result<(Optimum<T>, usize), LpError> {
        let tol = self.tol;
        let mut c = objective.to_vec();
        for e in &self.elims {
            if c[e.var].is_zero_tol(tol) {
                continue;
            }
            let cf = std::mem::replace(&mut c[e.var], T::zero());
            for (cj, a) in c.iter_mut().zip(&e.coeffs) {
                if !a.is_zero_tol(tol) {
                    *cj -= cf.clone() * a;
                }
            }
        }
        let mut tab = self.tab.clone();
        let ncols = tab.ncols;
        let mut obj = vec![T::zero(); ncols + 1];
        for (j, map) in self.cols.iter().enumerate() {
            match *map {
                ColMap::Bounded(col) => obj[col] = -c[j].clone(),
                ColMap::Split(p, m) => {
                    obj[p] = -c[j].clone();
                    obj[m] = c[j].clone();
                }
                ColMap::Eliminated => {}
            }
        }
        for (row, &b) in tab.rows.iter().zip(&tab.basis) {
            if b >= self.n_struct || obj[b].is_zero_tol(tol) {
                continue;
            }
            let f = obj[b].clone();
            for (o, v) in obj.iter_mut().zip(row) {
                if !v.is_zero_tol(tol) {
                    *o -= f.clone() * v;
                }
            }
            obj[b] = T::zero();
        }
        tab.obj = obj;
        let mut pivots = 0;
        let end = tab.run(self.n_enter, tol, &mut pivots, self.max_pivots)?;
        let point = self.recover(&tab);
        let out = match end {
            RunEnd::Optimal => {
                let value = crate::scalar::dot(objective, &point);
                Optimum::Bounded { value, point }
            }
            RunEnd::Unbounded => Optimum::Unbounded { point },
        };
        Ok((out, pivots))
    }

    /// Number of constraint rows left after presolve.
    #[allow(dead_code)]
    pub(crate) fn rows(&self) -> usize {
        self.tab.rows.len()
    }
}
