//! Which cells share a facet, and turning unattributed cell constraints into
//! per-neighbour separators.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::geometry::{CellComplex, Domain, GeometryError, Halfspace};
use crate::lp::polyhedron::{probe, Probe};
use crate::lp::{analyze_polyhedron, LpError};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdjacencyError {
    #[error("complex has no cells")]
    EmptyComplex,
    #[error("complex lives in dimension {complex} but the domain in {domain}")]
    DimensionMismatch { complex: usize, domain: usize },
    #[error("cell {cell} has dimension {dim} within the domain")]
    NonFullDimensionalCell { cell: usize, dim: isize },
    #[error("cells {i} and {j} meet along a facet but their separators disagree")]
    InconsistentSeparators { i: usize, j: usize },
    #[error("cell {cell} has several non-parallel constraints on its facet with {neighbor}")]
    AmbiguousFacet { cell: usize, neighbor: usize },
    #[error("cells do not partition the domain: {0}")]
    PartitionViolation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Neighbour index sets `J_i^D` and the hyperplane (as cell `i`'s constraint)
/// of every shared facet.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyStructure<T> {
    pub index_sets: Vec<BTreeSet<usize>>,
    pub facet_hyperplanes: BTreeMap<(usize, usize), Halfspace<T>>,
}

impl<T> AdjacencyStructure<T> {
    /// Number of ordered adjacent pairs.
    pub fn num_ordered_pairs(&self) -> usize {
        self.index_sets.iter().map(BTreeSet::len).sum()
    }

    pub fn ordered_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.index_sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
    }
}

pub fn compute_adjacency<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
) -> Result<AdjacencyStructure<T>, AdjacencyError> {
    compute_adjacency_with_tolerance(complex, domain, Tolerance::DEFAULT)
}

/// Cells `i` and `j` are adjacent when `P_i ∩ P_j ∩ D` has dimension `d - 1`.
///
/// Fails if a cell is not full-dimensional in the domain, two cells overlap in
/// a full-dimensional set, or the constraints along a shared facet do not
/// describe one hyperplane from both sides. A declared adjacency on the
/// complex must match the computed one.
pub fn compute_adjacency_with_tolerance<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    tol: Tolerance,
) -> Result<AdjacencyStructure<T>, AdjacencyError> {
    let k = complex.k();
    let d = complex.dim();
    if k == 0 {
        return Err(AdjacencyError::EmptyComplex);
    }
    if domain.dim() != d {
        return Err(AdjacencyError::DimensionMismatch {
            complex: d,
            domain: domain.dim(),
        });
    }
    let cells: Vec<Vec<Halfspace<T>>> = (0..k).map(|i| complex.cell_constraints(i)).collect();
    let dom = domain.halfspaces();

    for (i, cell) in cells.iter().enumerate() {
        let hs: Vec<_> = cell.iter().chain(dom).cloned().collect();
        let full = matches!(
            probe(d, &hs, &[], tol, Some(d as isize))?,
            Probe::Exact(ref info) if info.dim == d as isize
        );
        if !full {
            let dim = analyze_polyhedron(d, &hs, &[], tol)?.dim;
            return Err(AdjacencyError::NonFullDimensionalCell { cell: i, dim });
        }
    }

    let mut index_sets = vec![BTreeSet::new(); k];
    let mut facets = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            let (ni, nj) = (cells[i].len(), cells[j].len());
            let hs: Vec<_> = cells[i]
                .iter()
                .chain(&cells[j])
                .chain(dom)
                .cloned()
                .collect();
            let info = match probe(d, &hs, &[], tol, Some(d as isize - 1))? {
                Probe::Below => continue,
                Probe::Exact(info) => info,
            };
            if info.dim == d as isize {
                return Err(AdjacencyError::PartitionViolation(format!(
                    "cells {i} and {j} overlap in a full-dimensional region"
                )));
            }
            if info.dim < d as isize - 1 {
                continue;
            }
            let tight_i: Vec<_> = info.implicit.iter().filter(|&&t| t < ni).copied().collect();
            let tight_j: Vec<_> = info
                .implicit
                .iter()
                .filter(|&&t| t >= ni && t < ni + nj)
                .map(|&t| t - ni)
                .collect();
            let hi = facet_constraint(&cells[i], &tight_i, i, j, tol)?;
            let hj = facet_constraint(&cells[j], &tight_j, j, i, tol)?;
            if !hj.is_opposite_of(hi, tol) {
                return Err(AdjacencyError::InconsistentSeparators { i, j });
            }
            for (a, b, h) in [(i, j, hi), (j, i, hj)] {
                let rep = match complex.separator(a, b) {
                    Some(s) if s.is_positive_multiple_of(h, tol) => s.clone(),
                    Some(_) => return Err(AdjacencyError::InconsistentSeparators { i, j }),
                    None => h.clone(),
                };
                facets.insert((a, b), rep);
            }
            index_sets[i].insert(j);
            index_sets[j].insert(i);
        }
    }

    if let Some(declared) = complex.adjacency() {
        for i in 0..k {
            if let Some(&j) = declared[i].symmetric_difference(&index_sets[i]).next() {
                return Err(AdjacencyError::InconsistentSeparators {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
        }
    }
    Ok(AdjacencyStructure {
        index_sets,
        facet_hyperplanes: facets,
    })
}

/// The single hyperplane (up to positive scale) among `cell`'s constraints
/// that are tight on its facet with `neighbor`.
fn facet_constraint<'a, T: Scalar>(
    cell: &'a [Halfspace<T>],
    tight: &[usize],
    this: usize,
    neighbor: usize,
    tol: Tolerance,
) -> Result<&'a Halfspace<T>, AdjacencyError> {
    let Some((&first, rest)) = tight.split_first() else {
        return Err(AdjacencyError::PartitionViolation(format!(
            "the facet shared by cells {this} and {neighbor} is not on the boundary of cell {this}"
        )));
    };
    let rep = &cell[first];
    if rest.iter().all(|&t| cell[t].is_positive_multiple_of(rep, tol)) {
        Ok(rep)
    } else {
        Err(AdjacencyError::AmbiguousFacet {
            cell: this,
            neighbor,
        })
    }
}

/// Checks that every facet of every cell either lies on the domain boundary
/// or is shared with an adjacent cell. Redundant constraints are ignored.
///
/// A facet with no neighbour on the far side means part of the domain next
/// to it belongs to no cell.
pub fn check_facet_coverage<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    adj: &AdjacencyStructure<T>,
    tol: Tolerance,
) -> Result<(), AdjacencyError> {
    let d = complex.dim();
    let dom = domain.halfspaces();
    for i in 0..complex.k() {
        let cell = complex.cell_constraints(i);
        let region: Vec<_> = cell.iter().chain(dom).cloned().collect();
        for c in &cell {
            let attributed = adj.index_sets[i].iter().any(|&j| {
                c.is_positive_multiple_of(&adj.facet_hyperplanes[&(i, j)], tol)
            });
            if attributed || dom.iter().any(|h| h.is_positive_multiple_of(c, tol)) {
                continue;
            }
            let on_face = probe(d, &region, std::slice::from_ref(c), tol, Some(d as isize - 1))?;
            if matches!(on_face, Probe::Exact(ref info) if info.dim == d as isize - 1) {
                return Err(AdjacencyError::PartitionViolation(format!(
                    "a facet of cell {i} borders no other cell inside the domain"
                )));
            }
        }
    }
    Ok(())
}

/// Rewrites a complex given as plain constraint lists into one with a
/// separator per adjacent ordered pair and the adjacency attached.
///
/// Constraints that lie on the domain boundary or are redundant are dropped.
/// A facet-defining constraint shared with no neighbour means the cells leave
/// part of the domain uncovered.
pub fn normalize_raw<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
) -> Result<CellComplex<T>, AdjacencyError> {
    normalize_raw_with_tolerance(complex, domain, Tolerance::DEFAULT)
}

pub fn normalize_raw_with_tolerance<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    tol: Tolerance,
) -> Result<CellComplex<T>, AdjacencyError> {
    let adj = compute_adjacency_with_tolerance(complex, domain, tol)?;
    check_facet_coverage(complex, domain, &adj, tol)?;
    let d = complex.dim();
    let mut out = CellComplex::paired_with_tolerance(d, complex.k(), adj.facet_hyperplanes, tol)?
        .with_adjacency(adj.index_sets)?;
    if let Some(labels) = complex.labels() {
        out = out.with_labels(labels.to_vec())?;
    }
    Ok(out)
}
