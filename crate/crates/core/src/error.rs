use std::path::PathBuf;

use crate::graph::PerturbMode;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("invalid edge ({u}, {v}) for graph with {n} vertices")]
    InvalidEdge { u: usize, v: usize, n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown graph name `{0}`")]
    UnknownGraph(String),

    #[error("perturbation ({mode}) exhausted valid candidates after {done} of {requested} edges")]
    Exhausted {
        mode: PerturbMode,
        done: usize,
        requested: usize,
    },

    #[error("vertex {0} is isolated; its probability measure is undefined")]
    DegenerateMeasure(usize),

    #[error("vertices {0} and {1} lie in different connected components")]
    Disconnected(usize, usize),

    #[error("edge function does not match graph edges (missing {missing:?}, unexpected {unexpected:?})")]
    DomainMismatch {
        missing: Vec<(usize, usize)>,
        unexpected: Vec<(usize, usize)>,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("correlation undefined: zero variance")]
    UndefinedCorrelation,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("graph {index}: {source}")]
    AtGraph {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_graph(index: usize) -> impl FnOnce(Error) -> Error {
        move |e| Error::AtGraph {
            index,
            source: Box::new(e),
        }
    }

    /// True for failures caused by malformed or unreadable input rather than
    /// by the computation itself.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::SelfLoop { .. }
            | Error::InvalidEdge { .. }
            | Error::UnknownGraph(_)
            | Error::Io { .. }
            | Error::Json(_)
            | Error::Empty(_) => true,
            Error::AtGraph { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
