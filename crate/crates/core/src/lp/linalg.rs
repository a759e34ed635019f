//! Exact row reduction used for ranks, affine hulls and equality presolve.

use crate::scalar::{Scalar, Tolerance};

/// Outcome of adding a row to a [`RowBasis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    /// Row was independent and is now part of the basis.
    Added,
    /// Row is a combination of the basis rows.
    Dependent,
    /// Pivot columns reduce to zero but the trailing columns do not.
    Inconsistent,
}

/// Rows kept in reduced echelon form, pivoting only on the first
/// `pivot_cols` columns. Any trailing columns (typically a right-hand side)
/// are carried along.
#[derive(Debug, Clone)]
pub struct RowBasis<T> {
    pivot_cols: usize,
    width: usize,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
    tol: Tolerance,
}

impl<T: Scalar> RowBasis<T> {
    pub fn new(pivot_cols: usize, width: usize, tol: Tolerance) -> Self {
        assert!(pivot_cols <= width);
        RowBasis {
            pivot_cols,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            tol,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.width);
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero_tol(self.tol) {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero_tol(self.tol) {
                    *o -= f.clone() * r;
                }
            }
            out[p] = T::zero();
        }
        out
    }

    /// Classifies `v` without modifying the basis.
    pub fn classify(&self, v: &[T]) -> Insert {
        let red = self.reduce(v);
        Self::classify_reduced(&red, self.pivot_cols, self.tol)
    }

    fn classify_reduced(red: &[T], pivot_cols: usize, tol: Tolerance) -> Insert {
        if red[..pivot_cols].iter().any(|x| !x.is_zero_tol(tol)) {
            Insert::Added
        } else if red[pivot_cols..].iter().any(|x| !x.is_zero_tol(tol)) {
            Insert::Inconsistent
        } else {
            Insert::Dependent
        }
    }

    pub fn insert(&mut self, v: &[T]) -> Insert {
        let mut red = self.reduce(v);
        let kind = Self::classify_reduced(&red, self.pivot_cols, self.tol);
        if kind != Insert::Added {
            return kind;
        }
        let p = (0..self.pivot_cols)
            .find(|&j| !red[j].is_zero_tol(self.tol))
            .expect("independent row has a pivot");
        let inv = T::one() / &red[p];
        for x in red.iter_mut() {
            *x *= inv.clone();
        }
        red[p] = T::one();
        // Keep the basis fully reduced so `reduce` is a single pass.
        for row in self.rows.iter_mut() {
            if row[p].is_zero_tol(self.tol) {
                continue;
            }
            let f = row[p].clone();
            for (o, r) in row.iter_mut().zip(&red) {
                if !r.is_zero_tol(self.tol) {
                    *o -= f.clone() * r;
                }
            }
            row[p] = T::zero();
        }
        self.rows.push(red);
        self.pivots.push(p);
        Insert::Added
    }
}

/// Rank of a list of equal-length vectors.
pub fn rank<T: Scalar>(vectors: &[Vec<T>], tol: Tolerance) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let width = first.len();
    let mut basis = RowBasis::new(width, width, tol);
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}
