//! Exact-arithmetic toolkit for finite-dimensional algebras given by
//! structure constants: identity checking, semicontinuous invariants,
//! degeneration-certificate verification and degeneration graphs.
//!
//! All computation happens over the field of multivariate rational
//! functions with rational coefficients. The variable `t` is reserved
//! for deformation curves; every other variable is a family parameter.

pub mod algebra;
pub mod catalog;
pub mod degeneration;
pub mod error;
pub mod graph;
pub mod identities;
pub mod invariants;
pub mod linalg;
pub mod sample;
pub mod scalars;

pub use algebra::{Algebra, SquareMatrix};
pub use catalog::{
    builtin_catalog, parse_algebra_blocks, parse_algebra_file, parse_certificate_file,
    serialize_algebra, Catalog,
};
pub use degeneration::{
    check_necessary_conditions, family_closure_dimension_estimate, trivial_scaling_certificate,
    verify_certificate, BlockReason, Certificate, ClosureEstimate, NecessaryVerdict, Rejection,
    Verdict, VerifyMode, VerifyOptions,
};
pub use error::Error;
pub use graph::{
    build_graph, components_report, graph_to_dot, graph_to_json, saturate, ComponentsReport,
    DegenerationGraph, GraphOptions,
};
pub use identities::{check_cd, check_symmetry, is_derivation, CdReport, Symmetry, SymmetryReport};
pub use invariants::{
    annihilator_dimension, derivation_algebra, invariant_profile, orbit_dimension,
    power_series_dims, square_dimension, DerivationSpace, InvariantProfile, PowerSeries,
    ProfileMode,
};
pub use scalars::{Polynomial, Rational, Scalar, Sym};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
