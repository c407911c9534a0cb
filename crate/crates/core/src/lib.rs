//! Exact-arithmetic construction of affine Kac-Moody algebras and their
//! unitarizable highest weight modules.
//!
//! The crate builds generalized Cartan matrices, the catalog of realized
//! affine root systems (untwisted and twisted), Chevalley bases with integer
//! structure constants, the loop realization with its central extension,
//! and generalized Verma modules carrying a contravariant Hermitian form.
//! Positive semidefiniteness of that form is certified at bounded depth by
//! exact symmetric-pivoted LDL^T factorization; no floating point is used
//! anywhere.

pub mod affine;
pub mod cartan;
pub mod chevalley;
pub mod linalg;
pub mod rootdata;
pub mod scalar;
pub mod unitary;
pub mod verma;
pub mod weights;

pub use cartan::{Classification, GeneralizedCartanMatrix, Kind, Symmetrizer};
pub use rootdata::{AmbientForm, RealizedRootSystem, RootWithMultiplicity};
pub use scalar::{CRat, Cyc, Rat};
