//! Deciding whether a cell complex is a power diagram.
//!
//! For every ordered adjacent pair `(i, j)` with separator `a . x <= b` the
//! unknown sites, gammas and scale factors must satisfy
//! `lambda_ij a = s_j - s_i`, `lambda_ij b = gamma_j - gamma_i` and
//! `lambda_ij >= 1`. Fixing `s_0 = 0`, `gamma_0 = 0` removes the translation
//! freedom. Any feasible point is a certificate; infeasibility proves no
//! power diagram produces the complex.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::adjacency::{
    compute_adjacency_with_tolerance, normalize_raw_with_tolerance, AdjacencyError,
    AdjacencyStructure,
};
use crate::geometry::{
    offsets_from_gammas, CellComplex, Domain, GeometryError, Halfspace, PowerDiagramSpec,
    PowerOffsets,
};
use crate::lp::{analyze_polyhedron, is_subset, LinearSystem, LpError, Solver, Status, DEFAULT_MAX_PIVOTS};
use crate::scalar::{is_zero_vec, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error("no separator recorded for adjacent pair ({i},{j})")]
    MissingSeparator { i: usize, j: usize },
    #[error("certificate has {found} sites for a complex with {expected} cells")]
    CertificateShape { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Sites, gammas and scale factors reproducing a complex.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub spec: PowerDiagramSpec<T>,
    pub lambdas: BTreeMap<(usize, usize), T>,
    pub offsets: PowerOffsets<T>,
}

/// Size of the feasibility system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemStats {
    pub cells: usize,
    pub dim: usize,
    /// Ordered adjacent pairs `p`.
    pub ordered_pairs: usize,
    /// `3p`: one vector equality, one scalar equality and one bound per pair.
    pub grouped_constraints: usize,
    /// `k d + k + p`.
    pub variables: usize,
    /// Scalar equality rows actually passed to the solver (gauge included).
    pub scalar_equalities: usize,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T> {
    IsPowerDiagram(Certificate<T>),
    NotPowerDiagram,
    InvalidInput(String),
}

impl<T> Verdict<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::IsPowerDiagram(_) => "IsPowerDiagram",
            Verdict::NotPowerDiagram => "NotPowerDiagram",
            Verdict::InvalidInput(_) => "InvalidInput",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate<T>> {
        match self {
            Verdict::IsPowerDiagram(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult<T> {
    pub verdict: Verdict<T>,
    /// Present whenever the feasibility system was built.
    pub stats: Option<SystemStats>,
    pub adjacency: Option<AdjacencyStructure<T>>,
}

/// Positions of the unknowns in the feasibility system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableLayout {
    pub cells: usize,
    pub dim: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl VariableLayout {
    pub fn site(&self, i: usize, c: usize) -> usize {
        i * self.dim + c
    }

    pub fn gamma(&self, i: usize) -> usize {
        self.cells * self.dim + i
    }

    pub fn lambda(&self, pair: usize) -> usize {
        self.cells * (self.dim + 1) + pair
    }

    pub fn num_vars(&self) -> usize {
        self.cells * (self.dim + 1) + self.pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PddSystem<T> {
    pub system: LinearSystem<T>,
    pub layout: VariableLayout,
    pub stats: SystemStats,
}

/// Builds the feasibility system over the ordered pairs of `adjacency`.
pub fn build_system<T: Scalar>(
    complex: &CellComplex<T>,
    adjacency: &AdjacencyStructure<T>,
) -> Result<PddSystem<T>, DetectError> {
    let (k, d) = (complex.k(), complex.dim());
    let pairs: Vec<(usize, usize)> = adjacency.ordered_pairs().collect();
    let layout = VariableLayout {
        cells: k,
        dim: d,
        pairs: pairs.clone(),
    };
    let mut sys = LinearSystem::new(layout.num_vars());
    for i in 0..k {
        for c in 0..d {
            sys.set_name(layout.site(i, c), format!("s{i}_{c}"));
        }
        sys.set_name(layout.gamma(i), format!("gamma{i}"));
    }
    let one = T::one();
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        let sep = complex
            .separator(i, j)
            .ok_or(DetectError::MissingSeparator { i, j })?;
        let lam = layout.lambda(idx);
        sys.set_name(lam, format!("lambda{i}_{j}"));
        sys.set_lower_bound(lam, one.clone());
        for c in 0..d {
            sys.add_sparse_equality(
                &[
                    (lam, sep.normal()[c].clone()),
                    (layout.site(j, c), -one.clone()),
                    (layout.site(i, c), one.clone()),
                ],
                T::zero(),
            );
        }
        sys.add_sparse_equality(
            &[
                (lam, sep.offset().clone()),
                (layout.gamma(j), -one.clone()),
                (layout.gamma(i), one.clone()),
            ],
            T::zero(),
        );
    }
    for c in 0..d {
        sys.add_sparse_equality(&[(layout.site(0, c), one.clone())], T::zero());
    }
    sys.add_sparse_equality(&[(layout.gamma(0), one.clone())], T::zero());

    let p = pairs.len();
    let stats = SystemStats {
        cells: k,
        dim: d,
        ordered_pairs: p,
        grouped_constraints: 3 * p,
        variables: k * d + k + p,
        scalar_equalities: sys.equalities.len(),
        pivots: 0,
    };
    Ok(PddSystem {
        system: sys,
        layout,
        stats,
    })
}

/// Reads sites, gammas and lambdas off a feasible point.
pub fn certificate_from_point<T: Scalar>(
    layout: &VariableLayout,
    point: &[T],
) -> Result<Certificate<T>, DetectError> {
    let (k, d) = (layout.cells, layout.dim);
    let sites: Vec<Vec<T>> = (0..k)
        .map(|i| (0..d).map(|c| point[layout.site(i, c)].clone()).collect())
        .collect();
    let gammas: Vec<T> = (0..k).map(|i| point[layout.gamma(i)].clone()).collect();
    let lambdas = layout
        .pairs
        .iter()
        .enumerate()
        .map(|(idx, &pair)| (pair, point[layout.lambda(idx)].clone()))
        .collect();
    // Sites of adjacent cells always differ; a disconnected adjacency graph
    // could leave two sites equal, which the verifier then rejects.
    let spec = PowerDiagramSpec::new_unchecked(sites, gammas);
    let offsets = offsets_from_gammas(&spec);
    Ok(Certificate {
        spec,
        lambdas,
        offsets,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    pub tol: Tolerance,
    pub max_pivots: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            tol: Tolerance::DEFAULT,
            max_pivots: DEFAULT_MAX_PIVOTS,
        }
    }
}

/// Decides whether `complex` restricted to `domain` is a power diagram.
pub fn detect<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
) -> Result<DetectionResult<T>, DetectError> {
    detect_with(complex, domain, &DetectOptions::default())
}

/// Structural problems with the input come back as
/// [`Verdict::InvalidInput`]; `Err` is reserved for solver failures.
pub fn detect_with<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    opts: &DetectOptions,
) -> Result<DetectionResult<T>, DetectError> {
    let invalid = |msg: String| DetectionResult {
        verdict: Verdict::InvalidInput(msg),
        stats: None,
        adjacency: None,
    };
    let normalized;
    let complex = if complex.is_paired() {
        complex
    } else {
        normalized = match normalize_raw_with_tolerance(complex, domain, opts.tol) {
            Ok(c) => c,
            Err(e) => return adjacency_failure(e).map(invalid),
        };
        &normalized
    };
    let adjacency = match compute_adjacency_with_tolerance(complex, domain, opts.tol) {
        Ok(a) => a,
        Err(e) => return adjacency_failure(e).map(invalid),
    };

    let pdd = build_system(complex, &adjacency)?;
    let solver = Solver {
        tol: opts.tol,
        max_pivots: opts.max_pivots,
    };
    let res = solver.find_feasible(&pdd.system)?;
    let stats = SystemStats {
        pivots: res.pivots,
        ..pdd.stats
    };
    let verdict = match (res.status, res.point) {
        (Status::Infeasible, _) => Verdict::NotPowerDiagram,
        (Status::Feasible, Some(point)) => {
            let cert = certificate_from_point(&pdd.layout, &point)?;
            if verify_certificate_with_tolerance(complex, domain, &cert, opts.tol)? {
                Verdict::IsPowerDiagram(cert)
            } else if T::EXACT {
                Verdict::InvalidInput(
                    "separators are consistent but the cells do not match any diagram \
                     built from them"
                        .into(),
                )
            } else {
                return Err(DetectError::Lp(LpError::NumericalBreakdown(
                    "certificate failed verification".into(),
                )));
            }
        }
        (Status::Feasible, None) => unreachable!("feasible result carries a point"),
    };
    Ok(DetectionResult {
        verdict,
        stats: Some(stats),
        adjacency: Some(adjacency),
    })
}

fn adjacency_failure(e: AdjacencyError) -> Result<String, DetectError> {
    match e {
        AdjacencyError::Lp(LpError::Malformed(m)) => Ok(m),
        AdjacencyError::Lp(lp) => Err(DetectError::Lp(lp)),
        AdjacencyError::Geometry(GeometryError::Lp(lp)) => Err(DetectError::Lp(lp)),
        other => Ok(other.to_string()),
    }
}

/// Whether the power diagram of `cert` restricted to `domain` has exactly
/// the cells of `complex` (cell `i` to cell `i`).
pub fn verify_certificate<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    cert: &Certificate<T>,
) -> Result<bool, DetectError> {
    verify_certificate_with_tolerance(complex, domain, cert, Tolerance::DEFAULT)
}

pub fn verify_certificate_with_tolerance<T: Scalar>(
    complex: &CellComplex<T>,
    domain: &Domain<T>,
    cert: &Certificate<T>,
    tol: Tolerance,
) -> Result<bool, DetectError> {
    let (k, d) = (complex.k(), complex.dim());
    if cert.spec.k() != k {
        return Err(DetectError::CertificateShape {
            expected: k,
            found: cert.spec.k(),
        });
    }
    if cert.spec.dim() != d || domain.dim() != d {
        return Err(DetectError::Geometry(GeometryError::DimensionMismatch {
            expected: d,
            found: if cert.spec.dim() != d { cert.spec.dim() } else { domain.dim() },
        }));
    }
    let dom = domain.halfspaces();
    for i in 0..k {
        let given: Vec<_> = complex
            .cell_constraints(i)
            .into_iter()
            .chain(dom.iter().cloned())
            .collect();
        let mut power: Vec<_> = dom.to_vec();
        let mut power_empty = false;
        for j in (0..k).filter(|&j| j != i) {
            let (n, o) = cert.spec.separator_parts(i, j);
            if is_zero_vec(&n, tol) {
                // Coincident sites: the cell is everything or nothing.
                power_empty |= o.is_negative_tol(tol);
            } else {
                power.push(Halfspace::new(n, o)?);
            }
        }
        let same = if power_empty {
            analyze_polyhedron(d, &given, &[], tol)?.dim < 0
        } else {
            is_subset(d, &given, &power, tol)? && is_subset(d, &power, &given, tol)?
        };
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}
