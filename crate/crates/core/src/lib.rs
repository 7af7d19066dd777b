//! Exact commutative algebra over prime fields: Groebner bases, minimal
//! free resolutions, Hilbert polynomials, ideal operations and sheaf
//! cohomology on projective space, together with two constructions of a
//! smooth irregular elliptic surface of degree 12 in P^4.

pub mod cli;
pub mod cohomology;
pub mod construct;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod resolve;

pub use error::{Error, Result};
pub use field::{Coef, PrimeField};
pub use groebner::GroebnerBasis;
pub use module::{FreeModule, GradedMatrix, GradedModule, Term, Vector};
pub use monomial::Monomial;
pub use poly::{Polynomial, Ring};
