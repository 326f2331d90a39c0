//! Exact verification of the two explicit isoparametric hypersurface families
//! with four principal curvatures and multiplicity pairs {4,5} (on S¹⁹) and
//! {6,9} (on S³¹).
//!
//! The library constructs the degree-4 Cartan–Münzner polynomials of both
//! families, extracts their second and third fundamental forms at explicit
//! adapted frames, and machine-checks — in exact arithmetic over Q(√2) —
//! every algebraic identity the classification arguments rest on, plus the
//! nullity bookkeeping of the shape-operator pencils.

pub mod algebras;
pub mod forms;
pub mod geometry;
pub mod mat;
pub mod pencil;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod suites;

pub use scalar::{CScalar, Scalar};
