//! Pointwise computation and cross-verification of the natural connections
//! of metric manifolds equipped with a trace-free structure tensor `J`
//! satisfying `J² = ±Id` and compatible with the metric up to a sign:
//! `g(JX, JY) = ±g(X, Y)`.
//!
//! The library covers the four geometries those signs select (almost
//! Hermitian, almost Norden, almost product Riemannian, almost
//! para-Hermitian) and computes, at sample points of a coordinate chart:
//!
//! - the Levi-Civita connection of `g`,
//! - the unique adapted connection singled out by a torsion trace condition
//!   (here called the well-adapted connection),
//! - the Chern-type connection (for `αε = −1`),
//! - the first canonical connection `∇⁰ = ∇^g + (−α/2)(∇^g J)J`,
//!
//! together with the algebraic certificates (Lie-algebra first
//! prolongations, transpose invariance, containments) under which the
//! well-adapted connection exists, and numerical checks of the uniqueness,
//! trace and coincidence statements tying all of these together.
//!
//! Fields are expression trees over chart coordinates ([`expr`]); all
//! derivatives are exact (dual numbers), so residuals of honest structures
//! sit at machine precision.

pub mod algebra;
pub mod catalog;
pub mod connection;
pub mod error;
pub mod expr;
pub mod frame;
pub mod linalg;
pub mod manifold;
pub mod sampling;

pub use algebra::{
    algebra_basis, existence_certificate, first_prolongation_dim, is_transpose_invariant,
    membership, AlgebraBasis, AlgebraFamily, ExistenceCertificate, FamilyTag, MembershipLevel,
};
pub use catalog::{catalog, load_example, ExampleEntry};
pub use connection::{
    chern, coincidence_report, covariant_g, covariant_j, curvature, first_canonical,
    is_kaehler_type, levi_civita, nijenhuis, solve_adapted, torsion, verify_trace_condition,
    well_adapted, Connection, ConnectionKind, PotentialSolve, Tensor3, Tensor4,
    TorsionCondition,
};
pub use error::{EvalError, GeomError, ParseError};
pub use expr::{parse_expression, Expr, MatrixField, Point};
pub use frame::{adapted_frame, adjoint_basis, dual_frame, is_adjoint_section, Coframe, Frame};
pub use manifold::{
    averaged_metric, eigenprojectors, twin_metric, validate_structure, Manifold, Sign,
    TwinMetric, ValidationReport,
};
