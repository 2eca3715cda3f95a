use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has no rows or columns")]
    EmptyMatrix,
    #[error("matrix entry count {got} does not match {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix has no kernel-positivity certificate")]
    MissingCertificate,
    #[error("kernel meets the nonnegative orthant, witness {0:?}")]
    KernelWitness(Vec<i64>),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("move {index} is not in the kernel of the matrix")]
    NotInKernel { index: usize },
    #[error("move {index} is invalid: {reason}")]
    InvalidMove { index: usize, reason: String },

    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    WrongEntryCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: not an integer: {token:?}")]
    NonInteger { line: usize, token: String },
    #[error("expected {expected} rows, found {found}")]
    WrongRowCount { expected: usize, found: usize },
    #[error("i/o error: {0}")]
    Io(String),

    #[error("graph has degree zero")]
    ZeroDegree,
    #[error("graph is disconnected: node {from} cannot reach node {to}")]
    Disconnected { from: usize, to: usize },
    #[error("graph has {nodes} nodes, above the exact-expansion limit {limit}")]
    SubsetLimit { nodes: usize, limit: usize },
    #[error("matrix is not symmetric (deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("translate u + F_small is not contained in F_big")]
    NotContained,
    #[error("size hypothesis violated: 2*{small} > {big}")]
    SizeHypothesis { small: usize, big: usize },
    #[error("node {0} has no non-loop edges")]
    IsolatedNode(usize),

    #[error("move set is empty")]
    EmptyMoveSet,
    #[error("coefficient budget exceeded: {count} > {limit}")]
    Budget { count: u128, limit: u128 },
    #[error("invalid walk configuration: {0}")]
    WalkConfig(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
