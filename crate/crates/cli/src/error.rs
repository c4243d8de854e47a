use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("scenario `{0}` not found (looked for a bundled name, a path, and the corpus directory)")]
    ScenarioNotFound(String),
    #[error("unknown suite `{0}`; see `quiverlab list-suites`")]
    UnknownSuite(String),
    #[error("unknown quiver preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] quiverlab_core::Error),
    #[error(transparent)]
    KTheory(#[from] quiverlab_ktheory::Error),
    #[error("could not serialize: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
