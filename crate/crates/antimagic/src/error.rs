use thiserror::Error;

use crate::graph::ValidationReport;

/// Crate-wide error type. Variants correspond to the failure modes of the
/// individual pipeline stages; the CLI maps all of them to exit code 2
/// except where noted in `cli`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },

    #[error("missing header line")]
    HeaderMissing,

    #[error("graph validation failed:\n{0}")]
    ValidationFailed(ValidationReport),

    #[error("graph is not connected")]
    NotConnected,

    #[error("root {0} is not an x-side (degree-k) vertex")]
    RootNotDegreeK(String),

    #[error("k = {0} is below the minimum of 3")]
    KTooSmall(usize),

    #[error("k = {0} is even; this path handles odd k only")]
    KEven(usize),

    #[error("k = {0} is odd; this path handles even k only")]
    KOdd(usize),

    #[error("disconnected input with even k is unsupported (pass best-effort to force per-component labelling)")]
    KEvenDisconnected,

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Usage(String),

    #[error("generator gave up after {retries} attempts (seed {seed})")]
    RetriesExhausted { retries: usize, seed: u64 },

    #[error("F-set pin conflict: {0}")]
    PinConflict(String),

    #[error("step dispatched for the wrong |F| mod 4 case: {0}")]
    WrongCase(String),

    #[error("labelling is partial: {assigned} of {expected} edges labelled")]
    PartialLabelling { assigned: usize, expected: usize },

    #[error("labels are not a bijection onto 1..{m}: {msg}")]
    NotBijective { m: usize, msg: String },

    #[error("graph has {m} edges, over the search budget of {budget}")]
    BudgetExceeded { m: usize, budget: usize },

    #[error("repair loop exceeded {cap} rounds without converging")]
    RepairDiverged { cap: usize },

    #[error("root of the last component collides with sigma({witness}); no component to the right to repair against")]
    ConflictInLastComponent { witness: String },

    #[error("conflict witness structure does not match the selected repair case: {0}")]
    WitnessMismatch(String),

    #[error("label pool has {pool} labels plus {pinned} pinned but the component has {m} edges")]
    PoolSizeMismatch { pool: usize, pinned: usize, m: usize },

    #[error("labelling file does not match the graph: {0}")]
    LabellingMismatch(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
