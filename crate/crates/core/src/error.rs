use thiserror::Error;

/// Errors produced by tournament construction, the balance checks, the
/// tester, and the repair/fit routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pair {{{x}, {y}}} appears more than once")]
    DuplicatePair { x: usize, y: usize },

    #[error("pair {{{x}, {y}}} is missing")]
    MissingPair { x: usize, y: usize },

    #[error("probability {value} is outside [{floor}, 1 - {floor}]")]
    OutOfRangeProbability { value: f64, floor: f64 },

    #[error("self loop at vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("need at least {min} vertices, got {n}")]
    TooFewVertices { n: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate cycle: {0}")]
    DegenerateCycle(String),

    #[error("not a spanning tree: {0}")]
    NotASpanningTree(String),

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("invalid score vector: {0}")]
    InvalidScores(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("{n} vertices exceeds the desk-scale limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        match self {
            e @ (Error::AtLine { .. } | Error::Parse { .. }) => e,
            e => Error::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }

    /// Strips any line annotation.
    pub fn kind(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.kind(),
            e => e,
        }
    }

    /// The input line an error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::AtLine { line, .. } | Error::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
