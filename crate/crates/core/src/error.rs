use thiserror::Error;

/// Errors produced by graph construction, reductions and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate arc ({tail}, {head})")]
    DuplicateEdge { tail: usize, head: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a digraph needs at least one vertex")]
    EmptyGraph,
    #[error("arc ({0}, {1}) is not in the graph")]
    InvalidEdge(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("tour weight overflows a 64-bit integer")]
    WeightOverflow,
    #[error("instance has {n} vertices, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("instance has no Hamiltonian cycle")]
    Infeasible,
    #[error("argument {0} is outside the domain d >= 1")]
    Domain(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dictionary grew past {cap} entries")]
    MemoryBudgetExceeded { cap: usize },
    #[error("{m} arcs requested but at most {max} fit")]
    TooDense { m: usize, max: usize },
    #[error("vertex count {0} must be even and at least 4")]
    OddN(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
