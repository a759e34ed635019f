//! Elicitation, peer-prediction and mechanism questions phrased as
//! restricted power diagram detection.
//!
//! Distributions over `n` outcomes are represented by their first `n - 1`
//! coordinates, so the probability simplex becomes the full-dimensional set
//! `{y >= 0, sum y <= 1}` in `R^(n-1)`.

use thiserror::Error;

use crate::adjacency::{
    check_facet_coverage, compute_adjacency_with_tolerance, normalize_raw_with_tolerance,
    AdjacencyError,
};
use crate::detector::{detect_with, DetectError, DetectOptions, DetectionResult};
use crate::geometry::{CellComplex, Domain, GeometryError, Halfspace};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElicitationError {
    #[error("need at least two outcomes, got {0}")]
    TooFewOutcomes(usize),
    #[error("expected {expected} cells (one per label), found {found}")]
    CellCountMismatch { expected: usize, found: usize },
    #[error("cells live in dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("belief model constraint is not maximal: {0}")]
    NonMaximalConstraint(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

/// `{y in R^(n-1) : y >= 0, sum y <= 1}`.
pub fn projected_simplex<T: Scalar>(n: usize) -> Result<Domain<T>, ElicitationError> {
    if n < 2 {
        return Err(ElicitationError::TooFewOutcomes(n));
    }
    let d = n - 1;
    let mut hs = Vec::with_capacity(n);
    for c in 0..d {
        let mut e = vec![T::zero(); d];
        e[c] = -T::one();
        hs.push(Halfspace::new(e, T::zero())?);
    }
    hs.push(Halfspace::new(vec![T::one(); d], T::one())?);
    Ok(Domain::new(d, hs)?)
}

/// Level sets of a finite property: cell `r` holds the (projected)
/// distributions for which report `r` is optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyPartition<T> {
    outcomes: Vec<String>,
    reports: Vec<String>,
    cells: CellComplex<T>,
}

impl<T: Scalar> PropertyPartition<T> {
    pub fn new(
        outcomes: Vec<String>,
        reports: Vec<String>,
        cells: CellComplex<T>,
    ) -> Result<Self, ElicitationError> {
        let n = outcomes.len();
        if n < 2 {
            return Err(ElicitationError::TooFewOutcomes(n));
        }
        check_shape(&cells, reports.len(), n - 1)?;
        Ok(PropertyPartition {
            outcomes,
            reports,
            cells,
        })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn reports(&self) -> &[String] {
        &self.reports
    }

    pub fn cells(&self) -> &CellComplex<T> {
        &self.cells
    }
}

/// A skeleton `g : T -> {1..m}` of an allocation rule over a type space.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeSpaceSkeleton<T> {
    outcomes: Vec<String>,
    type_space: Domain<T>,
    cells: CellComplex<T>,
}

impl<T: Scalar> TypeSpaceSkeleton<T> {
    pub fn new(
        outcomes: Vec<String>,
        type_space: Domain<T>,
        cells: CellComplex<T>,
    ) -> Result<Self, ElicitationError> {
        check_shape(&cells, cells.k(), type_space.dim())?;
        Ok(TypeSpaceSkeleton {
            outcomes,
            type_space,
            cells,
        })
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn type_space(&self) -> &Domain<T> {
        &self.type_space
    }

    pub fn cells(&self) -> &CellComplex<T> {
        &self.cells
    }
}

fn check_shape<T: Scalar>(
    cells: &CellComplex<T>,
    expected_k: usize,
    expected_dim: usize,
) -> Result<(), ElicitationError> {
    if cells.k() != expected_k {
        return Err(ElicitationError::CellCountMismatch {
            expected: expected_k,
            found: cells.k(),
        });
    }
    if cells.dim() != expected_dim {
        return Err(ElicitationError::DimensionMismatch {
            expected: expected_dim,
            found: cells.dim(),
        });
    }
    Ok(())
}

/// Outcome count `n` implied by cells in projected coordinates.
fn outcomes_for<T: Scalar>(cells: &CellComplex<T>) -> usize {
    cells.dim() + 1
}

/// A property is elicitable iff its level sets form a power diagram
/// restricted to the simplex.
pub fn check_elicitable<T: Scalar>(
    partition: &PropertyPartition<T>,
) -> Result<DetectionResult<T>, ElicitationError> {
    check_elicitable_with(partition, &DetectOptions::default())
}

pub fn check_elicitable_with<T: Scalar>(
    partition: &PropertyPartition<T>,
    opts: &DetectOptions,
) -> Result<DetectionResult<T>, ElicitationError> {
    let domain = projected_simplex(partition.outcomes.len())?;
    Ok(detect_with(&partition.cells, &domain, opts)?)
}

/// One cell per signal: the posteriors consistent with that signal. A
/// truthful mechanism exists iff the cells form a power diagram on the
/// simplex. Only maximal constraints (cells covering the simplex) are
/// supported.
pub fn check_belief_model<T: Scalar>(
    constraint_cells: &CellComplex<T>,
) -> Result<DetectionResult<T>, ElicitationError> {
    check_belief_model_with(constraint_cells, &DetectOptions::default())
}

pub fn check_belief_model_with<T: Scalar>(
    constraint_cells: &CellComplex<T>,
    opts: &DetectOptions,
) -> Result<DetectionResult<T>, ElicitationError> {
    let domain = projected_simplex(outcomes_for(constraint_cells))?;
    let partition_check = if constraint_cells.is_paired() {
        compute_adjacency_with_tolerance(constraint_cells, &domain, opts.tol)
            .and_then(|adj| check_facet_coverage(constraint_cells, &domain, &adj, opts.tol))
    } else {
        normalize_raw_with_tolerance(constraint_cells, &domain, opts.tol).map(|_| ())
    };
    if let Err(AdjacencyError::PartitionViolation(msg)) = partition_check {
        return Err(ElicitationError::NonMaximalConstraint(msg));
    }
    Ok(detect_with(constraint_cells, &domain, opts)?)
}

/// Whether some assignment of allocations to the skeleton's regions could be
/// implementable, i.e. whether the regions form a power diagram in the type
/// space.
pub fn check_skeleton<T: Scalar>(
    skeleton: &TypeSpaceSkeleton<T>,
) -> Result<DetectionResult<T>, ElicitationError> {
    check_skeleton_with(skeleton, &DetectOptions::default())
}

pub fn check_skeleton_with<T: Scalar>(
    skeleton: &TypeSpaceSkeleton<T>,
    opts: &DetectOptions,
) -> Result<DetectionResult<T>, ElicitationError> {
    Ok(detect_with(&skeleton.cells, &skeleton.type_space, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::Verdict;
    use crate::lp::polyhedron_dimension;
    use crate::scalar::{q, Rational};

    #[test]
    fn projected_simplex_shapes() {
        for n in 2..=6 {
            let d: Domain<Rational> = projected_simplex(n).unwrap();
            assert_eq!(d.dim(), n - 1);
            assert_eq!(d.halfspaces().len(), n);
            assert_eq!(
                polyhedron_dimension(n - 1, d.halfspaces(), &[]).unwrap(),
                n as isize - 1
            );
        }
        assert_eq!(
            projected_simplex::<Rational>(1).unwrap_err(),
            ElicitationError::TooFewOutcomes(1)
        );
    }

    #[test]
    fn two_signal_split_is_power_diagram() {
        let cells = CellComplex::paired(
            2,
            2,
            [((0, 1), Halfspace::new(vec![q(1, 1), q(-1, 1)], q(0, 1)).unwrap())],
        )
        .unwrap()
        .with_mirrors();
        let res = check_belief_model(&cells).unwrap();
        assert!(matches!(res.verdict, Verdict::IsPowerDiagram(_)));
    }

    #[test]
    fn gap_is_non_maximal() {
        // y1 <= 1/4 and y1 >= 1/2 leave a strip of the simplex uncovered.
        let raw = CellComplex::raw(
            2,
            vec![
                vec![Halfspace::new(vec![q(1, 1), q(0, 1)], q(1, 4)).unwrap()],
                vec![Halfspace::new(vec![q(-1, 1), q(0, 1)], q(-1, 2)).unwrap()],
            ],
        )
        .unwrap();
        assert!(matches!(
            check_belief_model(&raw),
            Err(ElicitationError::NonMaximalConstraint(_))
        ));
    }

    #[test]
    fn single_cell_skeleton() {
        let dom = Domain::boxed(&[q(0, 1), q(0, 1)], &[q(1, 1), q(1, 1)]).unwrap();
        let cells = CellComplex::paired(2, 1, []).unwrap();
        let sk = TypeSpaceSkeleton::new(vec!["a".into()], dom, cells).unwrap();
        let res = check_skeleton(&sk).unwrap();
        assert!(matches!(res.verdict, Verdict::IsPowerDiagram(_)));
        assert_eq!(res.stats.unwrap().ordered_pairs, 0);
    }

    #[test]
    fn partition_shape_validated() {
        let cells: CellComplex<Rational> = CellComplex::paired(2, 1, []).unwrap();
        let err = PropertyPartition::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec!["r1".into(), "r2".into()],
            cells,
        )
        .unwrap_err();
        assert_eq!(err, ElicitationError::CellCountMismatch { expected: 2, found: 1 });
    }
}
