use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("family is not accommodating: {0}")]
    NotAccommodating(String),
    #[error("labelled space is not weakly left resolving: {0}")]
    NotWeaklyLeftResolving(String),
    #[error("family is not closed under relative complements: {0}")]
    NotComplementClosed(String),
    #[error("`{0}` is not a labelled path")]
    NotLabelledPath(String),
    #[error("`{0}` is not an idempotent")]
    NotIdempotent(String),
    #[error("invalid semigroup element: {0}")]
    InvalidElement(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("filter family is not admissible: {0}")]
    NotAdmissible(String),
    #[error("filter family is not complete: {0}")]
    NotComplete(String),
    #[error("labelled graph is not left resolving")]
    NotLeftResolving,
    #[error("family is not the full power set of the vertices")]
    NotPowerset,
    #[error("power set of {0} vertices is too large to materialize")]
    TooManyVertices(usize),
    #[error("not a boundary path: {0}")]
    NotBoundaryPath(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("syntax: {0}")]
    Syntax(String),
}

impl Error {
    /// Malformed text, as opposed to well-formed input that fails a
    /// mathematical condition.
    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Syntax(_) | Error::Graph(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
