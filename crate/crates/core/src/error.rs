use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for root system of type {kind}")]
    InvalidRank { kind: char, rank: usize },
    #[error("cannot parse root system `{0}`")]
    RootSystemSyntax(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("components have different Coxeter numbers {0:?}")]
    UnequalCoxeter(Vec<usize>),
    #[error("subspace {subspace} is not defined for {root_system}")]
    SubspaceUndefined { subspace: String, root_system: String },
    #[error("empty point set")]
    EmptyInput,
    #[error("point {index} has squared norm {norm}, expected {expected}")]
    OffSphere { index: usize, norm: f64, expected: f64 },
    #[error("matrix is not traceless (trace {0})")]
    NonTraceless(f64),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("Eisenstein series weight {0} must be even and at least 4")]
    InvalidWeight(i64),
    #[error("root count {root_count} is impossible in dimension {dim}")]
    InconsistentRootCount { dim: usize, root_count: u64 },
    #[error("integral-test precondition violated: j = {j} < k/(2 alpha) = {threshold}")]
    MonotonicityViolated { j: u64, threshold: f64 },
    #[error("series truncated at {length} terms leaves a tail of {tail:e}")]
    TruncationInsufficient { length: usize, tail: f64 },
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("lattice is not critical (second moment of the root shell is not a multiple of I)")]
    NotCritical,
    #[error("tolerance {tol:e} unreachable within {max_terms} series terms")]
    ToleranceUnreachable { tol: f64, max_terms: usize },
    #[error("certificate inequality not established: {0}")]
    CertificateFails(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
