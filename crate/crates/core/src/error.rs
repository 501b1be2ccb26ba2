use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("edge set does not form a tree: {0}")]
    NotATree(String),

    #[error("vertex index {index} out of range for {len} vertices")]
    BadIndex { index: usize, len: usize },

    #[error("plumbing is not negative definite")]
    NotNegativeDefinite,

    #[error("vector {0:?} is not characteristic for this plumbing")]
    NotCharacteristic(Vec<i64>),

    #[error("vector {0:?} does not have the parity of the degree vector")]
    NotDeltaParity(Vec<i64>),

    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),

    #[error("vector length {got} does not match the move (expected {expected})")]
    MoveMismatch { expected: usize, got: usize },

    #[error("no negative definite plumbing found after {0} attempts")]
    GenerationFailed(usize),

    #[error("family needs seeds up to F_{needed}, only F_{available} available")]
    SeedsExhausted { needed: usize, available: usize },

    #[error("family violates (A3) at n = {n}, r = {r}")]
    A3Violated { n: usize, r: i64 },

    #[error("root has no single-vertex top level")]
    NotStabilized,

    #[error("spin^c structure must be given explicitly when |det M| = {0}")]
    AmbiguousSpinc(u64),
}

impl Error {
    /// Short machine-readable tag used in CLI and FFI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::Io { .. } => "Io",
            Error::NotATree(_) => "NotATree",
            Error::BadIndex { .. } => "BadIndex",
            Error::NotNegativeDefinite => "NotNegativeDefinite",
            Error::NotCharacteristic(_) => "NotCharacteristic",
            Error::NotDeltaParity(_) => "NotDeltaParity",
            Error::MoveNotApplicable(_) => "MoveNotApplicable",
            Error::MoveMismatch { .. } => "MoveMismatch",
            Error::GenerationFailed(_) => "GenerationFailed",
            Error::SeedsExhausted { .. } => "SeedsExhausted",
            Error::A3Violated { .. } => "A3Violated",
            Error::NotStabilized => "NotStabilized",
            Error::AmbiguousSpinc(_) => "AmbiguousSpinc",
        }
    }
}
