//! Deciding whether a polyhedral cell complex is a power diagram.
//!
//! Given cells `P_i = {x : a_ij . x <= b_ij}` with one separator per adjacent
//! pair, [`detector::detect`] either returns sites and gammas whose power
//! diagram (optionally restricted to a convex domain) has exactly those cells,
//! or proves that none exist. Exact rational arithmetic is the default; all
//! geometry and LP code is generic over [`Scalar`] so `f64` can be used with
//! a tolerance.
//!
//! ```
//! use powerdiag::{detect, CellComplex, Domain, Halfspace, Verdict};
//! use powerdiag::scalar::q;
//!
//! // Two cells of the real line split at 0.
//! let complex = CellComplex::paired(1, 2, [((0, 1), Halfspace::new(vec![q(1, 1)], q(0, 1))?)])?
//!     .with_mirrors();
//! let result = detect(&complex, &Domain::full(1))?;
//! assert!(matches!(result.verdict, Verdict::IsPowerDiagram(_)));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod adjacency;
pub mod detector;
pub mod elicitation;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod random;
pub mod scalar;

pub use adjacency::{compute_adjacency, normalize_raw, AdjacencyError, AdjacencyStructure};
pub use detector::{
    build_system, detect, detect_with, verify_certificate, Certificate, DetectError,
    DetectOptions, DetectionResult, SystemStats, Verdict,
};
pub use elicitation::{
    check_belief_model, check_elicitable, check_skeleton, projected_simplex, ElicitationError,
    PropertyPartition, TypeSpaceSkeleton,
};
pub use geometry::{
    classify_point, forward_construct, offsets_from_gammas, power_value, CellComplex, Domain,
    ForwardError, GeometryError, Halfspace, PowerDiagramSpec, PowerOffsets,
};
pub use lp::{find_feasible, max_slack, polyhedron_dimension, LinearSystem, LpError};
pub use scalar::{Rational, Scalar, Tolerance};
