//! Dimension and containment queries for H-polyhedra.
//!
//! The dimension of `{x : A x <= b, E x = f}` is `d - rank` of the equalities
//! together with the implicit equalities (inequalities tight at every point).
//! Implicit equalities are found with slack-maximising LPs.

use crate::geometry::Halfspace;
use crate::lp::linalg::{Insert, RowBasis};
use crate::lp::{LinearSystem, LpError, Optimum, Solver};
use crate::scalar::{Scalar, Tolerance};

/// Dimension of a polyhedron (`-1` when empty) and the indices of the
/// inequalities that hold with equality everywhere on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionInfo {
    pub dim: isize,
    pub implicit: Vec<usize>,
}

pub(crate) enum Probe {
    Exact(DimensionInfo),
    /// The dimension is strictly below the requested floor.
    Below,
}

/// Dimension of `{x : ineq} ∩ {x : eq as equalities}`.
pub fn polyhedron_dimension<T: Scalar>(
    dim: usize,
    inequalities: &[Halfspace<T>],
    equalities: &[Halfspace<T>],
) -> Result<isize, LpError> {
    analyze_polyhedron(dim, inequalities, equalities, Tolerance::DEFAULT).map(|i| i.dim)
}

pub fn analyze_polyhedron<T: Scalar>(
    dim: usize,
    inequalities: &[Halfspace<T>],
    equalities: &[Halfspace<T>],
    tol: Tolerance,
) -> Result<DimensionInfo, LpError> {
    match probe(dim, inequalities, equalities, tol, None)? {
        Probe::Exact(info) => Ok(info),
        Probe::Below => unreachable!("no floor requested"),
    }
}

fn check_dims<T: Scalar>(dim: usize, hs: &[Halfspace<T>]) -> Result<(), LpError> {
    match hs.iter().find(|h| h.dim() != dim) {
        Some(h) => Err(LpError::Malformed(format!(
            "halfspace in dimension {} inside dimension {dim}",
            h.dim()
        ))),
        None => Ok(()),
    }
}

/// Computes the dimension, or returns [`Probe::Below`] as soon as it is known
/// to be less than `floor`.
pub(crate) fn probe<T: Scalar>(
    dim: usize,
    inequalities: &[Halfspace<T>],
    equalities: &[Halfspace<T>],
    tol: Tolerance,
    floor: Option<isize>,
) -> Result<Probe, LpError> {
    check_dims(dim, inequalities)?;
    check_dims(dim, equalities)?;
    let empty = || {
        Probe::Exact(DimensionInfo {
            dim: -1,
            implicit: Vec::new(),
        })
    };

    let mut basis = RowBasis::new(dim, dim + 1, tol);
    for e in equalities {
        if basis.insert(&e.augmented()) == Insert::Inconsistent {
            return Ok(empty());
        }
    }

    let m = inequalities.len();
    let mut implicit = vec![false; m];
    for k in 0..m {
        for l in k + 1..m {
            if inequalities[l].is_opposite_of(&inequalities[k], tol) {
                implicit[k] = true;
                implicit[l] = true;
            }
        }
    }
    for k in 0..m {
        let aug = inequalities[k].augmented();
        if implicit[k] {
            if basis.insert(&aug) == Insert::Inconsistent {
                return Ok(empty());
            }
        } else if basis.classify(&aug) == Insert::Dependent {
            // Identically tight on the affine hull of the equalities.
            implicit[k] = true;
        }
    }

    let solver = Solver::with_tolerance(tol);
    let eq_rows: Vec<(Vec<T>, T)> = basis
        .rows()
        .iter()
        .map(|r| (r[..dim].to_vec(), r[dim].clone()))
        .collect();
    let mut candidates: Vec<usize> = (0..m).filter(|&k| !implicit[k]).collect();
    let finish = |implicit: &[bool], basis: &RowBasis<T>| {
        let mut b = basis.clone();
        for (k, h) in inequalities.iter().enumerate() {
            if implicit[k] {
                b.insert(&h.augmented());
            }
        }
        Probe::Exact(DimensionInfo {
            dim: dim as isize - b.rank() as isize,
            implicit: (0..m).filter(|&k| implicit[k]).collect(),
        })
    };

    // One shared slack: positive iff some point is strictly inside every
    // candidate at once, i.e. no candidate is implicit.
    let mut sys = slack_system(dim, &eq_rows, inequalities, &[], &candidates, true);
    let mut obj = vec![T::zero(); dim + 1];
    obj[dim] = T::one();
    let t = match solver.max_slack(&sys, &obj) {
        Err(LpError::InfeasibleSystem) => return Ok(empty()),
        Err(e) => return Err(e),
        Ok(Optimum::Bounded { value, .. }) => value,
        Ok(Optimum::Unbounded { .. }) => unreachable!("slack is capped at 1"),
    };
    if t.is_positive_tol(tol) {
        return Ok(finish(&implicit, &basis));
    }
    if let Some(f) = floor {
        // Some candidate is implicit; its normal cannot already be in the
        // span, so the dimension drops by at least one.
        if dim as isize - basis.rank() as isize - 1 < f {
            return Ok(Probe::Below);
        }
    }

    let mut strict: Vec<usize> = Vec::new();
    while !candidates.is_empty() {
        sys = slack_system(dim, &eq_rows, inequalities, &strict, &candidates, false);
        let n = sys.num_vars;
        let mut obj = vec![T::zero(); n];
        for o in obj.iter_mut().skip(dim) {
            *o = T::one();
        }
        let point = match solver.max_slack(&sys, &obj)? {
            Optimum::Bounded { point, .. } => point,
            Optimum::Unbounded { .. } => unreachable!("slacks are capped at 1"),
        };
        let before = candidates.len();
        let mut rest = Vec::with_capacity(before);
        for (idx, &k) in candidates.iter().enumerate() {
            if point[dim + idx].is_positive_tol(tol) {
                strict.push(k);
            } else {
                rest.push(k);
            }
        }
        candidates = rest;
        if candidates.len() == before {
            break;
        }
    }
    for &k in &candidates {
        implicit[k] = true;
    }
    Ok(finish(&implicit, &basis))
}

/// Variables `x` (free) followed by slacks in `[0, 1]`. With `shared`, one
/// slack `t` is used for every candidate; otherwise each gets its own.
fn slack_system<T: Scalar>(
    dim: usize,
    eq_rows: &[(Vec<T>, T)],
    ineqs: &[Halfspace<T>],
    plain: &[usize],
    candidates: &[usize],
    shared: bool,
) -> LinearSystem<T> {
    let n_slack = if shared { 1 } else { candidates.len() };
    let n = dim + n_slack;
    let mut sys = LinearSystem::new(n);
    let pad = |normal: &[T]| {
        let mut c = normal.to_vec();
        c.resize(n, T::zero());
        c
    };
    for (a, b) in eq_rows {
        sys.add_equality(pad(a), b.clone());
    }
    for &k in plain {
        sys.add_inequality(pad(ineqs[k].normal()), ineqs[k].offset().clone());
    }
    for (idx, &k) in candidates.iter().enumerate() {
        let mut c = pad(ineqs[k].normal());
        c[dim + if shared { 0 } else { idx }] = T::one();
        sys.add_inequality(c, ineqs[k].offset().clone());
    }
    for s in dim..n {
        sys.set_lower_bound(s, T::zero());
        let mut c = vec![T::zero(); n];
        c[s] = T::one();
        sys.add_inequality(c, T::one());
    }
    sys
}

/// Whether `{inner} ⊆ {outer}`. An empty inner polyhedron is a subset of
/// everything.
pub fn is_subset<T: Scalar>(
    dim: usize,
    inner: &[Halfspace<T>],
    outer: &[Halfspace<T>],
    tol: Tolerance,
) -> Result<bool, LpError> {
    check_dims(dim, inner)?;
    check_dims(dim, outer)?;
    let pending: Vec<&Halfspace<T>> = outer
        .iter()
        .filter(|h| !inner.iter().any(|g| implies(g, h, tol)))
        .collect();
    if pending.is_empty() {
        return Ok(true);
    }
    let mut sys = LinearSystem::new(dim);
    for g in inner {
        sys.add_inequality(g.normal().to_vec(), g.offset().clone());
    }
    let objectives: Vec<Vec<T>> = pending.iter().map(|h| h.normal().to_vec()).collect();
    let optima = match Solver::with_tolerance(tol).max_many(&sys, &objectives) {
        Err(LpError::InfeasibleSystem) => return Ok(true),
        other => other?,
    };
    Ok(pending.iter().zip(optima).all(|(h, opt)| match opt {
        Optimum::Bounded { value, .. } => !value.cmp_tol(h.offset(), tol).is_gt(),
        Optimum::Unbounded { .. } => false,
    }))
}

/// `g` syntactically implies `h`: `h = mu g` on the normal with `mu > 0` and
/// `mu * offset_g <= offset_h`.
fn implies<T: Scalar>(g: &Halfspace<T>, h: &Halfspace<T>, tol: Tolerance) -> bool {
    let Some(k) = g.normal().iter().position(|a| !a.is_zero_tol(tol)) else {
        return false;
    };
    let mu = h.normal()[k].clone() / &g.normal()[k];
    if !mu.is_positive_tol(tol) {
        return false;
    }
    g.normal()
        .iter()
        .zip(h.normal())
        .all(|(a, b)| (b.clone() - a.clone() * &mu).is_zero_tol(tol))
        && !(mu * g.offset()).cmp_tol(h.offset(), tol).is_gt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn hs(n: &[i64], o: i64) -> Halfspace<Rational> {
        Halfspace::new(n.iter().map(|&x| q(x, 1)).collect(), q(o, 1)).unwrap()
    }

    fn unit_square() -> Vec<Halfspace<Rational>> {
        vec![hs(&[1, 0], 1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)]
    }

    #[test]
    fn square_is_two_dimensional() {
        assert_eq!(polyhedron_dimension(2, &unit_square(), &[]).unwrap(), 2);
    }

    #[test]
    fn segment_in_plane() {
        let mut h = unit_square();
        h.push(hs(&[0, 1], 0));
        let info = analyze_polyhedron(2, &h, &[], Tolerance::DEFAULT).unwrap();
        assert_eq!(info.dim, 1);
        assert_eq!(info.implicit, vec![3, 4]);
    }

    #[test]
    fn point_and_empty() {
        let h = vec![hs(&[1, 0], 0), hs(&[-1, 0], 0), hs(&[0, 1], 0), hs(&[0, -1], 0)];
        assert_eq!(polyhedron_dimension(2, &h, &[]).unwrap(), 0);
        let h = vec![hs(&[1], 0), hs(&[-1], -1)];
        assert_eq!(polyhedron_dimension(1, &h, &[]).unwrap(), -1);
    }

    #[test]
    fn implicit_equality_without_opposite_pair() {
        // x <= 0, y <= 0, x + y >= 0 forces x = y = 0.
        let h = vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, -1], 0)];
        let info = analyze_polyhedron(2, &h, &[], Tolerance::DEFAULT).unwrap();
        assert_eq!(info.dim, 0);
        assert_eq!(info.implicit, vec![0, 1, 2]);
    }

    #[test]
    fn equalities_reduce_dimension() {
        let eq = vec![hs(&[1, 1, 0], 1)];
        assert_eq!(polyhedron_dimension(3, &[], &eq).unwrap(), 2);
        let eq = vec![hs(&[1, 1, 0], 1), hs(&[2, 2, 0], 3)];
        assert_eq!(polyhedron_dimension(3, &[], &eq).unwrap(), -1);
    }

    #[test]
    fn unbounded_polyhedra() {
        assert_eq!(polyhedron_dimension(3, &[hs(&[1, 0, 0], 0)], &[]).unwrap(), 3);
        assert_eq!(polyhedron_dimension::<Rational>(2, &[], &[]).unwrap(), 2);
    }

    #[test]
    fn floor_short_circuits() {
        let h = vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, -1], 0)];
        assert!(matches!(
            probe(2, &h, &[], Tolerance::DEFAULT, Some(2)).unwrap(),
            Probe::Below
        ));
    }

    #[test]
    fn subset_checks() {
        let sq = unit_square();
        let half = vec![hs(&[1, 0], 2)];
        assert!(is_subset(2, &sq, &half, Tolerance::DEFAULT).unwrap());
        assert!(!is_subset(2, &half, &sq, Tolerance::DEFAULT).unwrap());
        let tight = vec![hs(&[1, 1], 1)];
        assert!(!is_subset(2, &sq, &tight, Tolerance::DEFAULT).unwrap());
        let empty = vec![hs(&[1, 0], 0), hs(&[-1, 0], -1)];
        assert!(is_subset(2, &empty, &tight, Tolerance::DEFAULT).unwrap());
        // Scaled copies are recognised without an LP.
        assert!(is_subset(2, &[hs(&[2, 0], 2)], &[hs(&[1, 0], 1)], Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn float_mode_dimension() {
        let h: Vec<Halfspace<f64>> = vec![
            Halfspace::new(vec![1.0, 0.0], 1.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 3.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
        ];
        assert_eq!(polyhedron_dimension(2, &h, &[]).unwrap(), 1);
    }
}
