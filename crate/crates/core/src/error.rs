use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis index {index} out of range for a {num_qubits}-qubit register")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },
    #[error("wire {wire} out of range for a {num_qubits}-wire register")]
    WireOutOfRange { wire: usize, num_qubits: usize },
    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),
    #[error("gate acts on {expected} wires but {got} were given")]
    ArityMismatch { expected: usize, got: usize },
    #[error("matrix is not unitary (max |UU^dagger - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude is not finite")]
    NonFinite,
    #[error("cannot force outcome {outcome} on qubit {qubit}: probability {probability:.3e}")]
    ImpossibleOutcome {
        qubit: usize,
        outcome: bool,
        probability: f64,
    },
    #[error("subset must be a nonempty proper subset of the register")]
    InvalidSubset,
    #[error("register of {num_qubits} qubits exceeds the cap of {cap}")]
    RegisterTooLarge { num_qubits: usize, cap: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("invalid parameters for gate `{gate}`: {reason}")]
    InvalidParams { gate: String, reason: String },
    #[error("operation requires a measurement-free circuit")]
    MeasurementPresent,
    #[error("classical slot `{0}` is already in use")]
    DuplicateSlot(String),
    #[error("classical slot `{0}` has not been measured yet")]
    UndefinedSlot(String),
    #[error("gate `{0}` has no Pauli conjugation rule")]
    UnsupportedGate(String),
    #[error("Pauli strings act on {left} and {right} qubits")]
    LengthMismatch { left: usize, right: usize },
    #[error("Pauli strings are limited to {max} qubits, got {got}")]
    TooManyPauliQubits { got: usize, max: usize },
    #[error("invalid Pauli string `{0}`")]
    InvalidPauli(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generators are not independent")]
    DependentGenerators,
    #[error("generator {0} is not Hermitian (phase must be +1 or -1)")]
    NonHermitianGenerator(usize),
    #[error("cannot measure the identity operator")]
    IdentityOperator,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("reconstruction search exhausted after {candidates} candidates (budget {budget})")]
    SearchExhausted { candidates: u64, budget: u64 },
    #[error("{0}")]
    Unsupported(String),
}
