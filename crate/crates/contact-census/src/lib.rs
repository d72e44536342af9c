//! Exact-arithmetic classification data for tight contact structures on
//! Seifert manifolds `M(e0, r)` fibred over the torus with one singular fibre.
//!
//! Everything is computed over the integers and exact rationals: slopes on a
//! torus, SL(2,Z) surgery matrices, negative continued fractions, shortest
//! paths in the Farey tessellation, tight-structure counts on solid tori,
//! the background census, and a bounded state-space traversal that decides
//! tightness and isotopy of the exceptional structures.
//!
//! The crate deliberately avoids floating point everywhere; slopes are
//! primitive integer vectors and all counts are derived from products of
//! continued-fraction coefficients, cross-checked against independent
//! enumerations.

pub mod census;
pub mod dividing_sets;
pub mod farey;
pub mod lattice;
pub mod solid_torus;
pub mod traversal;

/// Error for inputs outside an operation's domain (bad vectors, slopes out
/// of range, mismatched marked points, and so on).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct DomainError(pub String);

pub(crate) fn domain_error(msg: impl Into<String>) -> DomainError {
    DomainError(msg.into())
}

pub type Result<T> = std::result::Result<T, DomainError>;
