//! Polyhedral primitives and the forward map from `(sites, gammas)` to cells.
//!
//! A power diagram is stored in "gamma" form: cell `i` is
//! `{x : (s_j - s_i) . x <= gamma_j - gamma_i  for all j != i}`. The additive
//! power offset `v_i = s_i . s_i - 2 gamma_i` gives the equivalent
//! `argmin_j |x - s_j|^2 - v_j` description.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::adjacency::{self, AdjacencyError};
use crate::lp::{polyhedron, LpError};
use crate::scalar::{dot, is_zero_vec, scale_vec, sub_vec, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("halfspace normal is the zero vector")]
    ZeroNormal,
    #[error("a power diagram needs at least one site")]
    EmptySpec,
    #[error("sites {i} and {j} coincide")]
    CoincidentSites { i: usize, j: usize },
    #[error("cell index {index} out of range for {k} cells")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("cell {0} cannot be separated from itself")]
    SelfSeparator(usize),
    #[error("separators ({i},{j}) and ({j},{i}) are not opposite up to positive scale")]
    InconsistentPair { i: usize, j: usize },
    #[error("adjacency is not symmetric: {j} in J_{i} but {i} not in J_{j}")]
    AsymmetricAdjacency { i: usize, j: usize },
    #[error("no separator recorded for adjacent pair ({i},{j})")]
    MissingSeparator { i: usize, j: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("domain is not full-dimensional (dimension {0})")]
    DegenerateDomain(isize),
    #[error("box bounds must satisfy lo < hi in every coordinate")]
    EmptyBox,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `{x : normal . x <= offset}` with a nonzero normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace<T> {
    normal: Vec<T>,
    offset: T,
}

impl<T: Scalar> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Result<Self, GeometryError> {
        if is_zero_vec(&normal, Tolerance(0.0)) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Halfspace { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[T] {
        &self.normal
    }

    pub fn offset(&self) -> &T {
        &self.offset
    }

    /// `offset - normal . x`; nonnegative iff `x` lies in the halfspace.
    pub fn slack(&self, x: &[T]) -> T {
        self.offset.clone() - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[T], tol: Tolerance) -> bool {
        !self.slack(x).is_negative_tol(tol)
    }

    /// The closure of the complementary halfspace.
    pub fn negated(&self) -> Self {
        Halfspace {
            normal: self.normal.iter().map(|a| -a.clone()).collect(),
            offset: -self.offset.clone(),
        }
    }

    /// Multiplies normal and offset by `c` (which must be positive to keep
    /// the same set).
    pub fn scaled(&self, c: &T) -> Self {
        Halfspace {
            normal: scale_vec(&self.normal, c),
            offset: self.offset.clone() * c,
        }
    }

    /// `[normal..., offset]`.
    pub fn augmented(&self) -> Vec<T> {
        let mut v = self.normal.clone();
        v.push(self.offset.clone());
        v
    }

    /// The `mu` with `self = mu * other` (normal and offset), if any.
    pub fn ratio_to(&self, other: &Self, tol: Tolerance) -> Option<T> {
        if self.dim() != other.dim() {
            return None;
        }
        let k = other.normal.iter().position(|a| !a.is_zero_tol(tol))?;
        let mu = self.normal[k].clone() / &other.normal[k];
        let matches = |a: &T, b: &T| (a.clone() - b.clone() * &mu).is_zero_tol(tol);
        let ok = self
            .normal
            .iter()
            .zip(&other.normal)
            .all(|(a, b)| matches(a, b))
            && matches(&self.offset, &other.offset);
        ok.then_some(mu)
    }

    /// Same halfspace, possibly written with a different positive scale.
    pub fn is_positive_multiple_of(&self, other: &Self, tol: Tolerance) -> bool {
        self.ratio_to(other, tol)
            .is_some_and(|mu| mu.is_positive_tol(tol))
    }

    /// Complementary halfspace sharing the same boundary hyperplane.
    pub fn is_opposite_of(&self, other: &Self, tol: Tolerance) -> bool {
        self.ratio_to(other, tol)
            .is_some_and(|mu| mu.is_negative_tol(tol))
    }
}

/// The region a complex lives in: all of R^d, or a full-dimensional
/// H-polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T> {
    dim: usize,
    halfspaces: Vec<Halfspace<T>>,
}

impl<T: Scalar> Domain<T> {
    pub fn full(dim: usize) -> Self {
        Domain {
            dim,
            halfspaces: Vec::new(),
        }
    }

    pub fn new(dim: usize, halfspaces: Vec<Halfspace<T>>) -> Result<Self, GeometryError> {
        Self::with_tolerance(dim, halfspaces, Tolerance::DEFAULT)
    }

    pub fn with_tolerance(
        dim: usize,
        halfspaces: Vec<Halfspace<T>>,
        tol: Tolerance,
    ) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        if !halfspaces.is_empty() {
            let info = polyhedron::analyze_polyhedron(dim, &halfspaces, &[], tol)?;
            if info.dim != dim as isize {
                return Err(GeometryError::DegenerateDomain(info.dim));
            }
        }
        Ok(Domain { dim, halfspaces })
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn boxed(lo: &[T], hi: &[T]) -> Result<Self, GeometryError> {
        check_dim(lo.len(), hi.len())?;
        let d = lo.len();
        let mut hs = Vec::with_capacity(2 * d);
        for c in 0..d {
            if !hi[c].cmp_tol(&lo[c], Tolerance(0.0)).is_gt() {
                return Err(GeometryError::EmptyBox);
            }
            let mut e = vec![T::zero(); d];
            e[c] = T::one();
            hs.push(Halfspace::new(e.clone(), hi[c].clone())?);
            e[c] = -T::one();
            hs.push(Halfspace::new(e, -lo[c].clone())?);
        }
        Ok(Domain {
            dim: d,
            halfspaces: hs,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace<T>] {
        &self.halfspaces
    }

    pub fn is_full_space(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn contains(&self, x: &[T], tol: Tolerance) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected, found })
    }
}

/// `k` polyhedral cells described by per-neighbour separators.
///
/// `separators[(i, j)]` is the constraint bounding cell `i` against cell `j`.
/// Cells given as unattributed constraint lists ("raw" input) keep those in
/// `extra_constraints` until [`adjacency::normalize_raw`] pairs them up.
#[derive(Debug, Clone, PartialEq)]
pub struct CellComplex<T> {
    dim: usize,
    k: usize,
    separators: BTreeMap<(usize, usize), Halfspace<T>>,
    adjacency: Option<Vec<BTreeSet<usize>>>,
    extra_constraints: Vec<Vec<Halfspace<T>>>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> CellComplex<T> {
    /// Builds a complex from per-pair separators and checks pair consistency.
    pub fn paired(
        dim: usize,
        k: usize,
        separators: impl IntoIterator<Item = ((usize, usize), Halfspace<T>)>,
    ) -> Result<Self, GeometryError> {
        Self::paired_with_tolerance(dim, k, separators, Tolerance::DEFAULT)
    }

    pub fn paired_with_tolerance(
        dim: usize,
        k: usize,
        separators: impl IntoIterator<Item = ((usize, usize), Halfspace<T>)>,
        tol: Tolerance,
    ) -> Result<Self, GeometryError> {
        if k == 0 {
            return Err(GeometryError::EmptySpec);
        }
        let separators: BTreeMap<_, _> = separators.into_iter().collect();
        let c = CellComplex {
            dim,
            k,
            separators,
            adjacency: None,
            extra_constraints: vec![Vec::new(); k],
            labels: None,
        };
        c.validate(tol)?;
        Ok(c)
    }

    /// Builds a complex whose cells are plain constraint lists.
    pub fn raw(dim: usize, cells: Vec<Vec<Halfspace<T>>>) -> Result<Self, GeometryError> {
        if cells.is_empty() {
            return Err(GeometryError::EmptySpec);
        }
        let c = CellComplex {
            dim,
            k: cells.len(),
            separators: BTreeMap::new(),
            adjacency: None,
            extra_constraints: cells,
            labels: None,
        };
        c.validate(Tolerance::DEFAULT)?;
        Ok(c)
    }

    pub(crate) fn from_parts_unchecked(
        dim: usize,
        k: usize,
        separators: BTreeMap<(usize, usize), Halfspace<T>>,
        adjacency: Option<Vec<BTreeSet<usize>>>,
    ) -> Self {
        CellComplex {
            dim,
            k,
            separators,
            adjacency,
            extra_constraints: vec![Vec::new(); k],
            labels: None,
        }
    }

    fn validate(&self, tol: Tolerance) -> Result<(), GeometryError> {
        if self.k == 0 {
            return Err(GeometryError::EmptySpec);
        }
        for (&(i, j), h) in &self.separators {
            for idx in [i, j] {
                if idx >= self.k {
                    return Err(GeometryError::IndexOutOfRange { index: idx, k: self.k });
                }
            }
            if i == j {
                return Err(GeometryError::SelfSeparator(i));
            }
            check_dim(self.dim, h.dim())?;
            if i < j {
                if let Some(m) = self.separators.get(&(j, i)) {
                    if !m.is_opposite_of(h, tol) {
                        return Err(GeometryError::InconsistentPair { i, j });
                    }
                }
            }
        }
        if self.extra_constraints.len() != self.k {
            return Err(GeometryError::LengthMismatch {
                expected: self.k,
                found: self.extra_constraints.len(),
            });
        }
        for h in self.extra_constraints.iter().flatten() {
            check_dim(self.dim, h.dim())?;
        }
        if let Some(adj) = &self.adjacency {
            if adj.len() != self.k {
                return Err(GeometryError::LengthMismatch {
                    expected: self.k,
                    found: adj.len(),
                });
            }
            for (i, set) in adj.iter().enumerate() {
                for &j in set {
                    if j >= self.k {
                        return Err(GeometryError::IndexOutOfRange { index: j, k: self.k });
                    }
                    if i == j {
                        return Err(GeometryError::SelfSeparator(i));
                    }
                    if !adj[j].contains(&i) {
                        return Err(GeometryError::AsymmetricAdjacency { i, j });
                    }
                    if !self.separators.contains_key(&(i, j)) {
                        return Err(GeometryError::MissingSeparator { i, j });
                    }
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.k {
                return Err(GeometryError::LengthMismatch {
                    expected: self.k,
                    found: labels.len(),
                });
            }
        }
        Ok(())
    }

    /// Adds `(j,i) = -(i,j)` wherever only one orientation is recorded.
    pub fn with_mirrors(mut self) -> Self {
        let missing: Vec<_> = self
            .separators
            .iter()
            .filter(|(&(i, j), _)| !self.separators.contains_key(&(j, i)))
            .map(|(&(i, j), h)| ((j, i), h.negated()))
            .collect();
        self.separators.extend(missing);
        self
    }

    pub fn with_adjacency(mut self, sets: Vec<BTreeSet<usize>>) -> Result<Self, GeometryError> {
        self.adjacency = Some(sets);
        self.validate(Tolerance::DEFAULT)?;
        Ok(self)
    }

    pub fn without_adjacency(mut self) -> Self {
        self.adjacency = None;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GeometryError> {
        self.labels = Some(labels);
        self.validate(Tolerance::DEFAULT)?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn separators(&self) -> &BTreeMap<(usize, usize), Halfspace<T>> {
        &self.separators
    }

    pub fn separator(&self, i: usize, j: usize) -> Option<&Halfspace<T>> {
        self.separators.get(&(i, j))
    }

    pub fn adjacency(&self) -> Option<&[BTreeSet<usize>]> {
        self.adjacency.as_deref()
    }

    pub fn extra_constraints(&self, i: usize) -> &[Halfspace<T>] {
        &self.extra_constraints[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// True when every constraint is attributed to a neighbour.
    pub fn is_paired(&self) -> bool {
        self.extra_constraints.iter().all(Vec::is_empty)
    }

    /// Neighbours `j` for which a separator `(i, j)` is recorded.
    pub fn declared_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.separators.range((i, 0)..(i + 1, 0)).map(|(&(_, j), _)| j)
    }

    /// All constraints of cell `i`: its separators (by neighbour) then extras.
    pub fn cell_constraints(&self, i: usize) -> Vec<Halfspace<T>> {
        self.separators
            .range((i, 0)..(i + 1, 0))
            .map(|(_, h)| h.clone())
            .chain(self.extra_constraints[i].iter().cloned())
            .collect()
    }

    /// Whether `x` satisfies every constraint of cell `i` (domain not included).
    pub fn cell_contains(&self, i: usize, x: &[T], tol: Tolerance) -> bool {
        self.separators
            .range((i, 0)..(i + 1, 0))
            .map(|(_, h)| h)
            .chain(&self.extra_constraints[i])
            .all(|h| h.contains(x, tol))
    }

    /// Moves every separator into the per-cell unattributed lists.
    pub fn to_raw(&self) -> Self {
        let mut cells = self.extra_constraints.clone();
        for (&(i, _), h) in &self.separators {
            cells[i].push(h.clone());
        }
        CellComplex {
            dim: self.dim,
            k: self.k,
            separators: BTreeMap::new(),
            adjacency: None,
            extra_constraints: cells,
            labels: self.labels.clone(),
        }
    }

    /// Relabels cells: old cell `i` becomes cell `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GeometryError> {
        if perm.len() != self.k {
            return Err(GeometryError::LengthMismatch {
                expected: self.k,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.k];
        for &p in perm {
            if p >= self.k || seen[p] {
                return Err(GeometryError::IndexOutOfRange { index: p, k: self.k });
            }
            seen[p] = true;
        }
        let separators = self
            .separators
            .iter()
            .map(|(&(i, j), h)| ((perm[i], perm[j]), h.clone()))
            .collect();
        let adjacency = self.adjacency.as_ref().map(|adj| {
            let mut out = vec![BTreeSet::new(); self.k];
            for (i, set) in adj.iter().enumerate() {
                out[perm[i]] = set.iter().map(|&j| perm[j]).collect();
            }
            out
        });
        let mut extra = vec![Vec::new(); self.k];
        for (i, cs) in self.extra_constraints.iter().enumerate() {
            extra[perm[i]] = cs.clone();
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); self.k];
            for (i, s) in l.iter().enumerate() {
                out[perm[i]] = s.clone();
            }
            out
        });
        Ok(CellComplex {
            dim: self.dim,
            k: self.k,
            separators,
            adjacency,
            extra_constraints: extra,
            labels,
        })
    }

    /// Replaces separator `(i, j)` by `c` times itself (`c > 0`).
    pub fn with_scaled_separator(&self, i: usize, j: usize, c: &T) -> Result<Self, GeometryError> {
        if !c.is_positive_tol(Tolerance(0.0)) {
            return Err(GeometryError::ZeroNormal);
        }
        let mut out = self.clone();
        let h = out
            .separators
            .get_mut(&(i, j))
            .ok_or(GeometryError::MissingSeparator { i, j })?;
        *h = h.scaled(c);
        Ok(out)
    }
}

/// Sites and gammas of a power diagram in gamma form.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDiagramSpec<T> {
    sites: Vec<Vec<T>>,
    gammas: Vec<T>,
}

impl<T: Scalar> PowerDiagramSpec<T> {
    pub fn new(sites: Vec<Vec<T>>, gammas: Vec<T>) -> Result<Self, GeometryError> {
        if sites.is_empty() {
            return Err(GeometryError::EmptySpec);
        }
        if sites.len() != gammas.len() {
            return Err(GeometryError::LengthMismatch {
                expected: sites.len(),
                found: gammas.len(),
            });
        }
        let d = sites[0].len();
        if d == 0 {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for s in &sites {
            check_dim(d, s.len())?;
        }
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                if sites[i] == sites[j] {
                    return Err(GeometryError::CoincidentSites { i, j });
                }
            }
        }
        Ok(PowerDiagramSpec { sites, gammas })
    }

    pub(crate) fn new_unchecked(sites: Vec<Vec<T>>, gammas: Vec<T>) -> Self {
        PowerDiagramSpec { sites, gammas }
    }

    /// Rebuilds gammas from power offsets: `gamma_i = (s_i . s_i - v_i) / 2`.
    pub fn from_offsets(sites: Vec<Vec<T>>, offsets: &[T]) -> Result<Self, GeometryError> {
        if sites.len() != offsets.len() {
            return Err(GeometryError::LengthMismatch {
                expected: sites.len(),
                found: offsets.len(),
            });
        }
        let gammas = sites
            .iter()
            .zip(offsets)
            .map(|(s, v)| (dot(s, s) - v) * &T::half())
            .collect();
        Self::new(sites, gammas)
    }

    pub fn dim(&self) -> usize {
        self.sites[0].len()
    }

    pub fn k(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Vec<T>] {
        &self.sites
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    /// `(alpha s, alpha gamma)`; the same diagram for `alpha > 0`.
    pub fn scaled(&self, alpha: &T) -> Self {
        PowerDiagramSpec {
            sites: self.sites.iter().map(|s| scale_vec(s, alpha)).collect(),
            gammas: self.gammas.iter().map(|g| g.clone() * alpha).collect(),
        }
    }

    /// Adds `c` to every gamma; cells only see differences.
    pub fn shifted(&self, c: &T) -> Self {
        PowerDiagramSpec {
            sites: self.sites.clone(),
            gammas: self.gammas.iter().map(|g| g.clone() + c).collect(),
        }
    }

    /// The constraint `(s_j - s_i) . x <= gamma_j - gamma_i` as raw parts.
    pub fn separator_parts(&self, i: usize, j: usize) -> (Vec<T>, T) {
        (
            sub_vec(&self.sites[j], &self.sites[i]),
            self.gammas[j].clone() - &self.gammas[i],
        )
    }
}

/// Additive power offsets `v_i` (power `|x - s_i|^2 - v_i`) and the shifted
/// nonnegative variant `v_i - min_j v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerOffsets<T> {
    pub offsets: Vec<T>,
    pub shifted: Vec<T>,
}

impl<T: Scalar> PowerOffsets<T> {
    /// `w_i = sqrt(v_i')`. Always a float, even for exact offsets.
    pub fn weights(&self) -> Vec<f64> {
        self.shifted.iter().map(|v| v.to_f64().max(0.0).sqrt()).collect()
    }
}

/// `|x - site|^2 - offset`.
pub fn power_value<T: Scalar>(x: &[T], site: &[T], offset: &T) -> Result<T, GeometryError> {
    check_dim(site.len(), x.len())?;
    let diff = sub_vec(x, site);
    Ok(dot(&diff, &diff) - offset)
}

/// `v_i = s_i . s_i - 2 gamma_i`, plus the copy shifted so its minimum is 0.
pub fn offsets_from_gammas<T: Scalar>(spec: &PowerDiagramSpec<T>) -> PowerOffsets<T> {
    let two = T::from_i64(2);
    let offsets: Vec<T> = spec
        .sites
        .iter()
        .zip(&spec.gammas)
        .map(|(s, g)| dot(s, s) - two.clone() * g)
        .collect();
    let min = offsets
        .iter()
        .skip(1)
        .fold(offsets[0].clone(), |m, v| if *v < m { v.clone() } else { m });
    let shifted = offsets.iter().map(|v| v.clone() - &min).collect();
    PowerOffsets { offsets, shifted }
}

/// Every site index attaining the minimum power at `x` (ties included).
pub fn classify_point<T: Scalar>(
    x: &[T],
    spec: &PowerDiagramSpec<T>,
) -> Result<BTreeSet<usize>, GeometryError> {
    classify_point_with_tolerance(x, spec, Tolerance::DEFAULT)
}

pub fn classify_point_with_tolerance<T: Scalar>(
    x: &[T],
    spec: &PowerDiagramSpec<T>,
    tol: Tolerance,
) -> Result<BTreeSet<usize>, GeometryError> {
    check_dim(spec.dim(), x.len())?;
    let offsets = offsets_from_gammas(spec);
    let powers = spec
        .sites
        .iter()
        .zip(&offsets.offsets)
        .map(|(s, v)| power_value(x, s, v))
        .collect::<Result<Vec<_>, _>>()?;
    let best = powers
        .iter()
        .skip(1)
        .fold(&powers[0], |m, p| if p.cmp_tol(m, tol).is_lt() { p } else { m });
    Ok(powers
        .iter()
        .enumerate()
        .filter(|(_, p)| p.cmp_tol(best, tol).is_eq())
        .map(|(i, _)| i)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForwardError {
    #[error("cell of site {site} is empty within the domain")]
    EmptyCell { site: usize },
    #[error("cell of site {site} has dimension {dim} within the domain")]
    LowerDimensionalCell { site: usize, dim: isize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Adjacency(AdjacencyError),
}

impl From<AdjacencyError> for ForwardError {
    fn from(e: AdjacencyError) -> Self {
        match e {
            AdjacencyError::NonFullDimensionalCell { cell, dim } if dim < 0 => {
                ForwardError::EmptyCell { site: cell }
            }
            AdjacencyError::NonFullDimensionalCell { cell, dim } => {
                ForwardError::LowerDimensionalCell { site: cell, dim }
            }
            other => ForwardError::Adjacency(other),
        }
    }
}

/// The complex whose cell `i` is the gamma-form cell of site `i` intersected
/// with `domain`, keeping separators only for pairs sharing a facet in the
/// domain.
pub fn forward_construct<T: Scalar>(
    spec: &PowerDiagramSpec<T>,
    domain: &Domain<T>,
) -> Result<CellComplex<T>, ForwardError> {
    forward_construct_with_tolerance(spec, domain, Tolerance::DEFAULT)
}

pub fn forward_construct_with_tolerance<T: Scalar>(
    spec: &PowerDiagramSpec<T>,
    domain: &Domain<T>,
    tol: Tolerance,
) -> Result<CellComplex<T>, ForwardError> {
    check_dim(domain.dim(), spec.dim())?;
    let k = spec.k();
    let mut seps = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let (n, o) = spec.separator_parts(i, j);
                seps.insert((i, j), Halfspace::new(n, o)?);
            }
        }
    }
    let all = CellComplex::from_parts_unchecked(spec.dim(), k, seps, None);
    let adj = adjacency::compute_adjacency_with_tolerance(&all, domain, tol)?;
    let kept = all
        .separators
        .into_iter()
        .filter(|((i, j), _)| adj.index_sets[*i].contains(j))
        .collect();
    Ok(CellComplex::from_parts_unchecked(
        spec.dim(),
        k,
        kept,
        Some(adj.index_sets),
    ))
}

/// Complex, surviving spec and original indices of the surviving sites.
pub type Pruned<T> = (CellComplex<T>, PowerDiagramSpec<T>, Vec<usize>);

/// Like [`forward_construct`], but drops sites whose cells are empty or
/// lower-dimensional (one at a time, recomputing) until every cell is
/// full-dimensional.
pub fn forward_construct_pruned<T: Scalar>(
    spec: &PowerDiagramSpec<T>,
    domain: &Domain<T>,
    tol: Tolerance,
) -> Result<Pruned<T>, ForwardError> {
    let mut keep: Vec<usize> = (0..spec.k()).collect();
    let mut cur = spec.clone();
    loop {
        match forward_construct_with_tolerance(&cur, domain, tol) {
            Ok(c) => return Ok((c, cur, keep)),
            Err(ForwardError::EmptyCell { site } | ForwardError::LowerDimensionalCell { site, .. })
                if cur.k() > 1 =>
            {
                keep.remove(site);
                cur.sites.remove(site);
                cur.gammas.remove(site);
            }
            Err(e) => return Err(e),
        }
    }
}
