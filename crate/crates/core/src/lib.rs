//! Exact computations with preprojective modules, framed quiver data and
//! Hecke correspondences.

pub mod error;
pub mod framed;
pub mod graded;
pub mod hecke;
pub mod linalg;
pub mod moduli;
pub mod piq;
pub mod quiver;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{q, qq, Matrix, Rational, Subspace};
pub use piq::{ext_complex, ExtData, PiQModule, Rep};
pub use quiver::Quiver;
