use thiserror::Error;

/// Errors raised across the simulator, spline and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("gate acts on {expected} qubit(s) but {got} target(s) were given")]
    ArityMismatch { expected: usize, got: usize },
    #[error("target qubits must be distinct")]
    DuplicateTargets,
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("cannot normalise a zero vector")]
    ZeroVector,
    #[error("state is not normalised (norm² = {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range (valid: {lo}..={hi})")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("knot vector must be non-decreasing")]
    UnsortedKnots,
    #[error("knot vector of length {len} is too short for degree {degree}")]
    TooFewKnots { len: usize, degree: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is singular (pivot magnitude {pivot:e})")]
    Singular { pivot: f64 },
    #[error("degenerate range: max equals min")]
    DegenerateRange,
    #[error("overlap has non-negligible imaginary part {0:e}")]
    ComplexOverlap(f64),
    #[error("complex input is not supported by amplitude encoding")]
    ComplexInput,
}

pub type Result<T> = std::result::Result<T, Error>;
