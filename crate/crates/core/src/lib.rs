//! Multidegrees of bifiltered modules over the Weyl algebra.
//!
//! The pipeline: parse generators of a left ideal (or submodule) of the Weyl
//! algebra D, bihomogenize them in the Rees-type ring W = D⟨h⟩[θ], saturate,
//! build a Schreyer free resolution whose shifts give the K-polynomial,
//! compute the codimension from the characteristic ideal, and read off the
//! multidegree. The [`gkz`] module builds A-hypergeometric inputs.

pub mod dimension;
pub mod frontend;
pub mod gkz;
pub mod groebner;
pub mod kpoly;
pub mod order;
pub mod rational;
pub mod resolution;
pub mod ring;

pub use dimension::{codim, Codim, CommutativeIdeal};
pub use groebner::{FreeElement, FreeModule, GroebnerBasis};
pub use kpoly::{LaurentPoly2, Multidegree, TruncatedSeries2};
pub use order::{ModuleOrder, TermOrder};
pub use rational::Rational;
pub use resolution::{BifilteredPresentation, BifilteredResolution};
pub use ring::{Algebra, Bidegree, Monomial, Ring, VarSpec, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid variables: {0}")]
    InvalidVars(String),
    #[error("order is undefined for the zero element")]
    ZeroElement,
    #[error("element already carries homogenizer exponents")]
    AlreadyHomogenized,
    #[error("invalid term order: {0}")]
    InvalidOrder(String),
    #[error("input is not homogeneous for the requested order: {0}")]
    NotHomogeneous(String),
    #[error("saturation rejected: {0}")]
    Saturation(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}
