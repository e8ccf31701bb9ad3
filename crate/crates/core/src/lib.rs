//! Orbit-type strata of SU(n) gauge theories over compact orientable base
//! manifolds of dimension at most four.
//!
//! The pipeline: enumerate Howe signatures `J = (k|m)` ([`howe`]), model the
//! base cohomology ([`cohomology`]), solve the characteristic-class system
//! for each `J` and quotient by permutations ([`solver`]). Side modules give
//! classifying-space data ([`classifying`]) and Chern–Simons node flags
//! ([`nodes`]).

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod intlin;
pub mod scalar;

pub mod classifying;
pub mod cli;
pub mod cohomology;
pub mod howe;
pub mod nodes;
pub mod quadratic;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Machine integer used for cohomology coordinates.
pub type Int = i64;
/// Exact rational over [`Int`].
pub type Rational = num_rational::Ratio<Int>;
/// Integer matrix over [`Int`].
pub type IntMatrix = intlin::Matrix<Int>;

pub use cohomology::{
    builtin_manifold, load_manifold, CohClass1ModG, CohClass2, CohClass4, FinAbGroup, ManifoldModel,
};
pub use howe::{enumerate_classes, enumerate_signatures, HomotopyGroup, HoweSignature};
pub use solver::{
    classify, classify_signatures, e2, e4, quotient_classes, solve_system, verify_label,
    BundleSector, Catalog, OrbitTypeLabel, SolutionKind, SolutionSet, SolveOptions,
};
