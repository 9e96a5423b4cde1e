// SPDX-License-Identifier: MIT

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: syntax error: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: duplicate edge between {a} and {b}")]
    DuplicateEdge { line: usize, a: String, b: String },
    #[error("line {line}: self-loop on {node}")]
    SelfLoop { line: usize, node: String },
    #[error("line {line}: unknown directive '{directive}'")]
    UnknownDirective { line: usize, directive: String },
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("graph contains a directed cycle")]
    DirectedCycle,
    #[error("graph is not a DAG: {0}")]
    NotDag(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {nodes} nodes > limit {limit}")]
    SizeGuard { nodes: usize, limit: usize },
    #[error("candidate universe of {size} nodes exceeds cap {cap}")]
    UniverseCap { size: usize, cap: usize },
    #[error("no consistent extension exists")]
    NoExtension,
    #[error("singular design matrix when regressing {response} on {{{regressors}}}")]
    SingularDesign { response: String, regressors: String },
    #[error("data error: {0}")]
    Data(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
