//! Chain-level Morse–Bott flow categories.
//!
//! A flow category is modelled by its critical manifolds (as cellular chain
//! complexes with an index and a framing rank) and chain-level
//! correspondences between them. Realizing it produces a one-sided twisted
//! complex whose totalization computes the homology of the underlying
//! manifold. Around that core sit quotient and cone constructions, bimodule
//! and relative-module maps, the index-filtration spectral sequence,
//! Morse–Bott inequalities and truncated Borel models.

pub mod error;
pub mod fixtures;
pub mod flowcat;
pub mod format;
pub mod homalg;
pub mod inequalities;
pub mod scalar;
pub mod twisted;

pub use error::{Error, Result};
pub use homalg::{homology, CoefficientRing, GradedChainComplex, HomologySummary};
pub use scalar::Scalar;

/// Arbitrary-precision integers used by every chain-level construction.
pub type Int = num_bigint::BigInt;
/// Sparse integer matrix with arbitrary-precision entries.
pub type IntegerMatrix = homalg::SparseMatrix<Int>;
/// Sparse matrix with machine-word entries, for callers that bound their entries.
pub type SmallIntegerMatrix = homalg::SparseMatrix<i64>;
/// Integer Laurent polynomial.
pub type LaurentPoly = homalg::Laurent<Int>;
