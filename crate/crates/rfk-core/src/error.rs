use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("composition d_out * d_in is nonzero")]
    CompositionNonzero,
    #[error("d^2 != 0 starting at degree {0}")]
    DSquareNonzero(i64),
    #[error("not a chain map: {what} fails at degree {degree}")]
    NotAChainMap { what: String, degree: i64 },
    #[error("index {0} outside the window")]
    IndexOutOfWindow(i64),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("missing operation {0}")]
    MissingOperation(String),
    #[error("invalid operation data: {0}")]
    InvalidOperation(String),
    #[error("unstable popsicle type k={k}, |F|={f}")]
    Unstable { k: usize, f: usize },
    #[error("quiver is not a tree: {0}")]
    NotATree(String),
    #[error("dimension parameter n={0} is below 3")]
    DimensionTooSmall(i64),
    #[error("trace functional is not a cycle: {0}")]
    NotACycle(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("inconsistent scalars between objects {i} and {j}")]
    Inconsistent { i: usize, j: usize },
    #[error("non-isolated crossing: {0}")]
    NonIsolatedCrossing(String),
    #[error("Maslov index is zero")]
    ZeroMaslov,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("chord radius for period {0} is irrational")]
    IrrationalChord(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
