//! Graded algebras of symmetric tensors `S(X) = ⊕_p H⁰(X, SᵖT_X)` for a catalog
//! of smooth projective varieties, computed exactly.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactnum`]: rationals and cyclotomic fields ℚ(ζ_m)
//! - [`poly`]: sparse multivariate polynomials, monomial orders, text syntax
//! - [`groebner`]: Buchberger's algorithm and normal forms
//! - [`hilbert`]: Hilbert series as rational functions, Krull dimension
//! - [`invariants`]: binary polyhedral groups and Molien series
//! - [`catalog`]: one constructor per variety family, triviality registry, bound checks
//! - [`cli`] / [`verify`]: command-line surface and the self-verification suite

pub mod catalog;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod groebner;
pub mod hilbert;
pub mod invariants;
pub mod poly;
pub mod verify;


pub use error::{Error, Result};
pub use exactnum::{CyclotomicNumber, Rational};
pub use groebner::{GroebnerBasis, IdealPresentation};
pub use hilbert::{GradedDims, HilbertSeries, MonomialIdeal};
pub use catalog::{CatalogEntry, VarietySpec};
pub use invariants::{MatrixGroup, MolienResult};
pub use poly::{Monomial, MonomialOrder, Polynomial, VariableContext};
