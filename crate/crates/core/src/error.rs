use thiserror::Error;

/// Errors raised by the algebraic layers of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension vector has {got} entries but the quiver has {expected} vertices")]
    DimMismatch { expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("preprojective relation fails at vertex {vertex}")]
    RelationViolated { vertex: usize },
    #[error("moment map residual is nonzero at vertex {vertex}")]
    MomentNonzero { vertex: usize },
    #[error("representative is not a cocycle (not in the kernel of tau)")]
    NotClosed,
    #[error("extension class is zero; the extension would split")]
    SplitClass,
    #[error("framed module is not stable")]
    Unstable,
    #[error("module map is not surjective")]
    NotSurjective,
    #[error("composition degree {0} exceeds 2")]
    DegreeTooLarge(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
