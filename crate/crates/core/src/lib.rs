//! Quasi-periodic self-injective algebras and the `n`-angulated structure on
//! their categories of projective modules.
//!
//! Everything is generic over an exact [`Scalar`] field. The aliases below
//! name the instantiations used by the command line tool and the tests.

pub mod algebra;
pub mod angulation;
pub mod error;
pub mod field;
pub mod homological;
pub mod linalg;
pub mod module;
pub mod periodicity;
pub mod report;

pub use error::{Error, Result};
pub use field::{FieldSpec, Fp, Rational, Scalar};
pub use linalg::Matrix;

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type Q = Rational;
