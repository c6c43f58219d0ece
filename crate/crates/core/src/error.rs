use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },
    #[error("source and sink are the same node {node}")]
    SourceIsSink { node: usize },
}

/// Instance file error, tagged with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("duplicate problem line")]
    DuplicateProblemLine,
    #[error("negative capacity {0}")]
    NegativeCapacity(f64),
    #[error("nonpositive loss factor {0}")]
    NonPositiveLoss(f64),
    #[error("expected {expected} arc lines, found {found}")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("unknown arc id {0}")]
    UnknownArc(usize),
    #[error("arc {next} does not start where arc {prev} ends")]
    Broken { prev: usize, next: usize },
    #[error("path starts at node {found}, expected {expected}")]
    WrongStart { expected: usize, found: usize },
    #[error("path ends at node {found}, expected {expected}")]
    WrongEnd { expected: usize, found: usize },
    #[error("predecessor chain does not reach the source within {steps} steps")]
    PredecessorCycle { steps: usize },
    #[error("sink has zero label; no path")]
    NoPath,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(
        "arc {arc} has loss factor {loss} outside (0, 1]; normalize and restrict losses first"
    )]
    LossOutOfRange { arc: usize, loss: f64 },
    #[error("arc {arc} has invalid capacity {capacity}")]
    InvalidCapacity { arc: usize, capacity: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance has {n} nodes, above the enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("need at least one path, got 0")]
    NoPaths,
    #[error("invalid parameter: {0}")]
    Invalid(String),
}
