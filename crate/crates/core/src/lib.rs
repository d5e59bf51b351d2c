//! Macdonald and super-Macdonald polynomials, the deformed
//! Macdonald–Ruijsenaars operators, and the torus-integral Hermitian form
//! under which the super-Macdonald polynomials are orthogonal.

pub mod error;
pub mod operators;
pub mod partition;
pub mod poly;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod supermac;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
pub use poly::BiSymPoly;
pub use scalar::{ParamSet, Rational, Scalar};
