//! JSON documents for complexes, specs, certificates and verdicts.
//!
//! Numbers are written as strings (`"p/q"` or `"n"`). Exact documents reject
//! decimal literals; a document opts into them with `"arithmetic": "float"`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adjacency::AdjacencyStructure;
use crate::detector::{Certificate, DetectionResult, SystemStats, Verdict};
use crate::elicitation::{projected_simplex, ElicitationError};
use crate::geometry::{
    offsets_from_gammas, CellComplex, Domain, GeometryError, Halfspace, PowerDiagramSpec,
};
use crate::scalar::{ParseScalarError, Rational, Scalar, Tolerance};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error(transparent)]
    Number(#[from] ParseScalarError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

impl From<ElicitationError> for IoError {
    fn from(e: ElicitationError) -> Self {
        match e {
            ElicitationError::Geometry(g) => IoError::Geometry(g),
            other => IoError::Schema(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

/// A number as it appears in a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberValue {
    Text(String),
    Integer(i64),
    Decimal(f64),
}

impl NumberValue {
    pub fn from_scalar<T: Scalar>(v: &T) -> Self {
        NumberValue::Text(v.to_string())
    }

    /// Exact documents must hold exact rationals even when solved in floats.
    pub fn parse<T: Scalar>(&self, arithmetic: Arithmetic) -> Result<T, IoError> {
        let text = match self {
            NumberValue::Text(s) => s.clone(),
            NumberValue::Integer(n) => n.to_string(),
            NumberValue::Decimal(x) => {
                if arithmetic == Arithmetic::Exact {
                    return Err(ParseScalarError::NotExact(x.to_string()).into());
                }
                return Ok(T::from_f64(*x)?);
            }
        };
        if arithmetic == Arithmetic::Exact {
            Rational::parse_scalar(&text)?;
        }
        Ok(T::parse_scalar(&text)?)
    }
}

fn parse_vec<T: Scalar>(xs: &[NumberValue], a: Arithmetic) -> Result<Vec<T>, IoError> {
    xs.iter().map(|x| x.parse(a)).collect()
}

fn write_vec<T: Scalar>(xs: &[T]) -> Vec<NumberValue> {
    xs.iter().map(NumberValue::from_scalar).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<usize>,
    pub normal: Vec<NumberValue>,
    pub offset: NumberValue,
}

impl HalfspaceEntry {
    fn from_halfspace<T: Scalar>(h: &Halfspace<T>, neighbor: Option<usize>) -> Self {
        HalfspaceEntry {
            neighbor,
            normal: write_vec(h.normal()),
            offset: NumberValue::from_scalar(h.offset()),
        }
    }

    fn to_halfspace<T: Scalar>(&self, a: Arithmetic) -> Result<Halfspace<T>, IoError> {
        Ok(Halfspace::new(parse_vec(&self.normal, a)?, self.offset.parse(a)?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainDocument {
    Full,
    Simplex {
        outcomes: usize,
    },
    Box {
        lo: Vec<NumberValue>,
        hi: Vec<NumberValue>,
    },
    Halfspaces {
        halfspaces: Vec<HalfspaceEntry>,
    },
}

impl DomainDocument {
    pub fn from_domain<T: Scalar>(domain: &Domain<T>) -> Self {
        if domain.is_full_space() {
            DomainDocument::Full
        } else {
            DomainDocument::Halfspaces {
                halfspaces: domain
                    .halfspaces()
                    .iter()
                    .map(|h| HalfspaceEntry::from_halfspace(h, None))
                    .collect(),
            }
        }
    }

    pub fn to_domain<T: Scalar>(
        &self,
        dim: usize,
        a: Arithmetic,
        tol: Tolerance,
    ) -> Result<Domain<T>, IoError> {
        let domain = match self {
            DomainDocument::Full => Domain::full(dim),
            DomainDocument::Simplex { outcomes } => projected_simplex(*outcomes)?,
            DomainDocument::Box { lo, hi } => {
                Domain::boxed(&parse_vec::<T>(lo, a)?, &parse_vec::<T>(hi, a)?)?
            }
            DomainDocument::Halfspaces { halfspaces } => {
                let hs = halfspaces
                    .iter()
                    .map(|h| {
                        if h.neighbor.is_some() {
                            return Err(IoError::Schema("domain halfspaces take no neighbor".into()));
                        }
                        h.to_halfspace(a)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Domain::with_tolerance(dim, hs, tol)?
            }
        };
        if domain.dim() != dim {
            return Err(IoError::Schema(format!(
                "domain has dimension {}, document has {dim}",
                domain.dim()
            )));
        }
        Ok(domain)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexMode {
    Paired,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub schema_version: String,
    pub dim: usize,
    pub mode: ComplexMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub cells: Vec<Vec<HalfspaceEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainDocument>,
}

impl ComplexDocument {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: ComplexDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(IoError::Schema(format!(
                "unsupported schema_version {:?}",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic.unwrap_or_default()
    }

    /// Paired complexes are written one entry per ordered pair; others list
    /// each cell's constraints without neighbours.
    pub fn from_complex<T: Scalar>(complex: &CellComplex<T>, domain: Option<DomainDocument>) -> Self {
        let arithmetic = (!T::EXACT).then_some(Arithmetic::Float);
        let cells = (0..complex.k())
            .map(|i| {
                if complex.is_paired() {
                    complex
                        .declared_neighbors(i)
                        .map(|j| HalfspaceEntry::from_halfspace(&complex.separators()[&(i, j)], Some(j)))
                        .collect()
                } else {
                    complex
                        .cell_constraints(i)
                        .iter()
                        .map(|h| HalfspaceEntry::from_halfspace(h, None))
                        .collect()
                }
            })
            .collect();
        ComplexDocument {
            schema_version: SCHEMA_VERSION.into(),
            dim: complex.dim(),
            mode: if complex.is_paired() {
                ComplexMode::Paired
            } else {
                ComplexMode::Raw
            },
            arithmetic,
            labels: complex.labels().map(<[String]>::to_vec),
            cells,
            domain,
        }
    }

    /// Builds the complex; missing mirror separators are synthesized.
    pub fn to_complex<T: Scalar>(&self, tol: Tolerance) -> Result<CellComplex<T>, IoError> {
        let a = self.arithmetic();
        if self.cells.is_empty() {
            return Err(IoError::Schema("no cells".into()));
        }
        let k = self.cells.len();
        let complex = match self.mode {
            ComplexMode::Paired => {
                let mut seps = BTreeMap::new();
                for (i, cell) in self.cells.iter().enumerate() {
                    for e in cell {
                        let j = e.neighbor.ok_or_else(|| {
                            IoError::Schema(format!("paired cell {i} has an entry without neighbor"))
                        })?;
                        if j >= k {
                            return Err(GeometryError::IndexOutOfRange { index: j, k }.into());
                        }
                        let h = e.to_halfspace(a)?;
                        check_len(self.dim, &h)?;
                        if seps.insert((i, j), h).is_some() {
                            return Err(IoError::Schema(format!(
                                "cell {i} lists neighbor {j} twice"
                            )));
                        }
                    }
                }
                CellComplex::paired_with_tolerance(self.dim, k, seps, tol)?.with_mirrors()
            }
            ComplexMode::Raw => {
                let cells = self
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| {
                        cell.iter()
                            .map(|e| {
                                if e.neighbor.is_some() {
                                    return Err(IoError::Schema(format!(
                                        "raw cell {i} has an entry with neighbor"
                                    )));
                                }
                                let h = e.to_halfspace(a)?;
                                check_len(self.dim, &h)?;
                                Ok(h)
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                CellComplex::raw(self.dim, cells)?
            }
        };
        match &self.labels {
            Some(l) => Ok(complex.with_labels(l.clone())?),
            None => Ok(complex),
        }
    }

    /// The inline domain, or all of `R^dim` when absent.
    pub fn to_domain<T: Scalar>(&self, tol: Tolerance) -> Result<Domain<T>, IoError> {
        match &self.domain {
            Some(d) => d.to_domain(self.dim, self.arithmetic(), tol),
            None => Ok(Domain::full(self.dim)),
        }
    }
}

fn check_len<T: Scalar>(dim: usize, h: &Halfspace<T>) -> Result<(), IoError> {
    if h.dim() == dim {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: h.dim(),
        }
        .into())
    }
}

/// Input for forward construction: sites with either gammas or offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub sites: Vec<Vec<NumberValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<NumberValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<NumberValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainDocument>,
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_spec<T: Scalar>(spec: &PowerDiagramSpec<T>, domain: Option<DomainDocument>) -> Self {
        SpecDocument {
            schema_version: SCHEMA_VERSION.into(),
            arithmetic: (!T::EXACT).then_some(Arithmetic::Float),
            labels: None,
            sites: spec.sites().iter().map(|s| write_vec(s)).collect(),
            gammas: Some(write_vec(spec.gammas())),
            offsets: None,
            domain,
        }
    }

    pub fn to_spec<T: Scalar>(&self) -> Result<PowerDiagramSpec<T>, IoError> {
        let a = self.arithmetic.unwrap_or_default();
        let sites = self
            .sites
            .iter()
            .map(|s| parse_vec(s, a))
            .collect::<Result<Vec<Vec<T>>, _>>()?;
        match (&self.gammas, &self.offsets) {
            (Some(g), None) => Ok(PowerDiagramSpec::new(sites, parse_vec(g, a)?)?),
            (None, Some(v)) => Ok(PowerDiagramSpec::from_offsets(sites, &parse_vec::<T>(v, a)?)?),
            _ => Err(IoError::Schema(
                "give exactly one of \"gammas\" and \"offsets\"".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsDocument {
    pub cells: usize,
    pub dim: usize,
    pub ordered_pairs: usize,
    pub constraints: usize,
    pub variables: usize,
    pub scalar_equalities: usize,
    pub pivots: usize,
}

impl From<&SystemStats> for StatsDocument {
    fn from(s: &SystemStats) -> Self {
        StatsDocument {
            cells: s.cells,
            dim: s.dim,
            ordered_pairs: s.ordered_pairs,
            constraints: s.grouped_constraints,
            variables: s.variables,
            scalar_equalities: s.scalar_equalities,
            pivots: s.pivots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub i: usize,
    pub j: usize,
    pub value: NumberValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
    pub sites: Vec<Vec<NumberValue>>,
    pub gammas: Vec<NumberValue>,
    pub lambdas: Vec<LambdaEntry>,
    #[serde(default)]
    pub offsets: Vec<NumberValue>,
    #[serde(default)]
    pub shifted_offsets: Vec<NumberValue>,
    /// `sqrt` of the shifted offsets; floating point even in exact mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsDocument>,
}

impl CertificateDocument {
    pub fn from_certificate<T: Scalar>(cert: &Certificate<T>, stats: Option<&SystemStats>) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION.into(),
            arithmetic: (!T::EXACT).then_some(Arithmetic::Float),
            sites: cert.spec.sites().iter().map(|s| write_vec(s)).collect(),
            gammas: write_vec(cert.spec.gammas()),
            lambdas: cert
                .lambdas
                .iter()
                .map(|(&(i, j), v)| LambdaEntry {
                    i,
                    j,
                    value: NumberValue::from_scalar(v),
                })
                .collect(),
            offsets: write_vec(&cert.offsets.offsets),
            shifted_offsets: write_vec(&cert.offsets.shifted),
            weights: Some(cert.offsets.weights()),
            stats: stats.map(StatsDocument::from),
        }
    }

    /// Offsets are recomputed from the gammas rather than trusted.
    pub fn to_certificate<T: Scalar>(&self) -> Result<Certificate<T>, IoError> {
        let a = self.arithmetic.unwrap_or_default();
        let sites = self
            .sites
            .iter()
            .map(|s| parse_vec(s, a))
            .collect::<Result<Vec<Vec<T>>, _>>()?;
        if sites.is_empty() {
            return Err(IoError::Schema("certificate has no sites".into()));
        }
        let gammas = parse_vec(&self.gammas, a)?;
        if gammas.len() != sites.len() {
            return Err(GeometryError::LengthMismatch {
                expected: sites.len(),
                found: gammas.len(),
            }
            .into());
        }
        let d = sites[0].len();
        if let Some(s) = sites.iter().find(|s| s.len() != d) {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                found: s.len(),
            }
            .into());
        }
        let spec = PowerDiagramSpec::new_unchecked(sites, gammas);
        let lambdas = self
            .lambdas
            .iter()
            .map(|l| Ok(((l.i, l.j), l.value.parse(a)?)))
            .collect::<Result<BTreeMap<_, _>, IoError>>()?;
        Ok(Certificate {
            offsets: offsets_from_gammas(&spec),
            spec,
            lambdas,
        })
    }

    /// Accepts a bare certificate or a verdict document carrying one.
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = match value.get("certificate") {
            Some(c) if !c.is_null() => c.clone(),
            Some(_) => return Err(IoError::Schema("verdict document has no certificate".into())),
            None => value,
        };
        Ok(serde_json::from_value(inner)?)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub schema_version: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<BTreeSet<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsDocument>,
}

impl VerdictDocument {
    pub fn from_result<T: Scalar>(res: &DetectionResult<T>, with_stats: bool) -> Self {
        let stats = if with_stats { res.stats.as_ref() } else { None };
        VerdictDocument {
            schema_version: SCHEMA_VERSION.into(),
            verdict: res.verdict.name().into(),
            reason: match &res.verdict {
                Verdict::InvalidInput(r) => Some(r.clone()),
                _ => None,
            },
            adjacency: res.adjacency.as_ref().map(|a| a.index_sets.clone()),
            certificate: res
                .verdict
                .certificate()
                .map(|c| CertificateDocument::from_certificate(c, stats)),
            stats: stats.map(StatsDocument::from),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetEntry {
    pub i: usize,
    pub j: usize,
    pub normal: Vec<NumberValue>,
    pub offset: NumberValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyDocument {
    pub schema_version: String,
    pub index_sets: Vec<BTreeSet<usize>>,
    /// Index sets by label, when the complex is labelled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbors: Option<BTreeMap<String, BTreeSet<String>>>,
    pub facets: Vec<FacetEntry>,
}

impl AdjacencyDocument {
    pub fn from_structure<T: Scalar>(adj: &AdjacencyStructure<T>, labels: Option<&[String]>) -> Self {
        AdjacencyDocument {
            schema_version: SCHEMA_VERSION.into(),
            index_sets: adj.index_sets.clone(),
            neighbors: labels.map(|l| {
                adj.index_sets
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (l[i].clone(), s.iter().map(|&j| l[j].clone()).collect()))
                    .collect()
            }),
            facets: adj
                .facet_hyperplanes
                .iter()
                .map(|(&(i, j), h)| FacetEntry {
                    i,
                    j,
                    normal: write_vec(h.normal()),
                    offset: NumberValue::from_scalar(h.offset()),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with a trailing newline; key order follows field order.
pub fn to_json<S: Serialize>(doc: &S) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}
