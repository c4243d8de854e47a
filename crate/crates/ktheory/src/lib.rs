//! Symbolic K-theory with formal Chern roots.
//!
//! Classes are Laurent polynomials with integer coefficients in the roots of
//! named bundles, optionally with the hyperplane class `u` of one projective
//! bundle. The crate computes λ-operations, Koszul classes and projective
//! pushforwards, and checks the pushforward identities of the local derived
//! blow-up model.

pub mod context;
pub mod error;
pub mod identities;
pub mod laurent;
pub mod projective;

pub use context::{KClass, RootContext, RootGroup, Virtual};
pub use error::{Error, Result};
pub use identities::{CheckKind, IdentityReport};
pub use laurent::Laurent;
pub use projective::{canonicalize, pb_pushforward, push_poly, relation};
