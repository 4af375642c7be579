//! Word arithmetic for graphs of groups with free vertex groups, Dehn twist
//! automorphisms, and the linear/quadratic growth dichotomy for partial
//! Dehn twists relative to local Dehn twists.

pub mod dichotomy;
pub mod efficiency;
pub mod fixtures;
pub mod freeword;
pub mod gog;
pub mod growth;
pub mod hconj;
pub mod twist;

pub use freeword::{Basis, CyclicWord, Letter, Morphism, Word};
pub use gog::{EdgeGroup, EdgeId, GraphOfGroups, PathWord, Syllable, TreeIdentification, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition not satisfied: {0}")]
    Precondition(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
